#pragma once

// Special functions and quadrature grids used by every other module.
//
// Conventions: Jacobi polynomials are P_l^{(alpha, 0)}, orthogonal on [-1, 1]
// against (1 - u)^alpha. Bessel functions are of the first kind, real order.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace besselforge::specfun {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln Gamma(t + a1) + ln Gamma(t + a2) - 2 ln Gamma(t + (a1 + a2) / 2).
///
/// The three large log-Gamma values cancel to O(1/t); for large t the
/// difference is formed from the Stirling series directly, so the result keeps
/// full relative accuracy where subtracting std::lgamma values would not.
double log_gamma_balanced(double t, double a1, double a2);

/// P_l^{(alpha,0)}(u) by the three-term recurrence in the degree.
double jacobi_p(int degree, double alpha, double u);

/// P_0 .. P_max_degree of the (alpha, 0) family at u.
///
/// Accepts alpha > -2: the polynomials exist there even though the weight
/// (1-u)^alpha is only integrable for alpha > -1. The finite-rank augmentation
/// of the s <= -1 subspaces needs orders in (-2, -1].
std::vector<double> jacobi_p_sequence(int max_degree, double alpha, double u);

/// J_nu(x) for nu > -1, x >= 0.
double bessel_j(double nu, double x);

/// J_nu(x) for any real order and x > 0. Orders <= -1 are reached by the
/// downward order recurrence from orders in (-1, 1].
double bessel_j_any_order(double nu, double x);

namespace detail {
/// Power series, evaluated in extended precision.
double bessel_j_series(double nu, double x);
/// Hankel expansion truncated at its smallest term.
double bessel_j_asymptotic(double nu, double x);
/// Argument where bessel_j switches from the series to the Hankel expansion.
double bessel_switchover(double nu);
} // namespace detail

/// Nodes and positive weights on an interval; immutable once built.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;

  std::size_t size() const { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
  /// Sum of weights, i.e. the grid's measure of [a, b].
  double total_weight() const;
  /// Sub-grid of the nodes lying in [lo, hi] (weights untouched).
  QuadratureGrid restricted(double lo, double hi) const;
};

/// Gauss-Legendre rule with k points on [-1, 1].
void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights);

/// Composite Gauss-Legendre: m equal panels of k points on [a, b].
QuadratureGrid legendre_grid(int panels, int points_per_panel, double a, double b);

/// Composite Gauss-Legendre on geometric panels covering [x_min, x_max].
///
/// The panel count is ceil(decades * panels_per_decade), so panels are at most
/// 1/panels_per_decade of a decade wide. Integrands of the form x^p * smooth
/// are integrated to high relative accuracy on every panel.
QuadratureGrid halfline_grid(double x_min, double x_max, int panels_per_decade,
                             int points_per_panel);
/// Same, with every break inside (x_min, x_max) made a panel boundary, so that
/// restricting to an interval between breaks keeps whole panels.
QuadratureGrid halfline_grid(double x_min, double x_max, int panels_per_decade,
                             int points_per_panel, std::span<const double> breaks);

/// Textual "xmin:xmax:ppd:k" grid description used by the CLI and reports.
struct GridSpec {
  double x_min = 1e-8;
  double x_max = 200.0;
  int panels_per_decade = 8;
  int points_per_panel = 16;

  QuadratureGrid build() const;
  QuadratureGrid build(std::span<const double> breaks) const;
  /// Same range, twice the points per panel.
  GridSpec refined() const;
  std::string to_string() const;
  static GridSpec parse(const std::string& text);
};

} // namespace besselforge::specfun
