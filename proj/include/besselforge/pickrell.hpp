#pragma once

// Points of the Pickrell set, the map to atomic measures, and the
// Hellinger/Kakutani computation for the radial Jacobi laws.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace besselforge::pickrell {

/// omega = (gamma, x_1 >= x_2 >= ...), finitely many nonzero coordinates stored.
struct PickrellPoint {
  double gamma = 0.0;
  std::vector<double> xs;

  /// Throws DomainError unless xs is nonincreasing and nonnegative and
  /// gamma >= sum(xs) - 1e-10.
  void validate() const;
  double deficiency() const;
};

struct AtomicMeasure {
  std::vector<std::pair<double, double>> atoms; // (location, mass)
};

/// Atoms at every x_i > 0 with mass min(x_i, 1).
AtomicMeasure s_map(const PickrellPoint& omega);
/// Atoms at every x_i > 0 with mass f(x_i).
AtomicMeasure sigma_f(const PickrellPoint& omega, const std::function<double(double)>& f);
/// Inverse on the equality stratum gamma = sum x_i. Throws DomainError if some
/// atom's mass is not min(location, 1) to 1e-9.
PickrellPoint s_inverse(const AtomicMeasure& eta);
bool in_omega_p_R(const PickrellPoint& omega, double R);

/// prod_x exp(-beta x) over the configuration.
double psi_mult(std::span<const double> points, double beta);

/// ln Hel(n, s, s2) from the closed Gamma-ratio formula.
double hellinger_log(int n, double s, double s2);
double hellinger_exact(int n, double s, double s2);
/// 1 - Hel without cancellation.
double hellinger_gap(int n, double s, double s2);

/// ln int_0^inf r^p (1 + r)^{-q} dr by quadrature (q > p + 1 > 0).
double log_r_integral(double p, double q);
/// Hel rebuilt from six r-integrals:
///   B(n-1, n+sigma) B(n, n+sigma) / sqrt(B(n-1, n+s) B(n-1, n+s2) B(n, n+s) B(n, n+s2)),
/// sigma = (s + s2)/2, each Beta evaluated by log_r_integral. Needs n >= 2.
double hellinger_oracle(int n, double s, double s2);

/// Smallest n >= 1 with n + s > 1 and n + s2 > 1.
int first_valid_n(double s, double s2);

struct HellingerRow {
  int n = 0;
  double hel = 1.0;
  double one_minus_hel = 0.0;
  double partial_sum = 0.0;
};

struct HellingerReport {
  double s = 0.0;
  double s2 = 0.0;
  std::vector<HellingerRow> per_n;
  double raw_c = 0.0;     // N (1 - Hel) at N = N_max
  double fitted_c = 0.0;  // Richardson estimate of lim n (1 - Hel) from N_max and N_max / 2
  double candidate_difference = 0.0; // (s - s2)^2 / 8
  double candidate_sum = 0.0;        // (s + s2)^2 / 8
  double slope = 0.0;     // of partial sums against ln N over the top decade
  double intercept = 0.0;
  double r_squared = 0.0;
  std::string verdict = "not-decided";
};

/// Terms for n = first_valid_n .. n_max, partial sums, regression over
/// N in [n_max / 10, n_max]. "singular" when R^2 > 0.99, slope > 0 and the
/// slope matches fitted_c to 10%; "equal" when s == s2.
HellingerReport kakutani_scan(double s, double s2, int n_max, unsigned threads = 1);

} // namespace besselforge::pickrell
