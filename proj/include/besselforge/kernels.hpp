#pragma once

// Closed-form kernels of the Jacobi/Bessel family.
//
//   cd_u             Christoffel-Darboux kernel on (-1, 1), weight folded in
//   hat              the same kernel transported to (0, inf) by u = (l-1)/(l+1)
//   rescaled         n^2 * hat(n^2 x1, n^2 x2)
//   bessel_tw        Tracy-Widom hard-edge Bessel kernel
//   modified_bessel  bessel_tw transported by y = 4/x
//
// Every kernel here is the kernel of an orthogonal projection against plain
// Lebesgue measure on its domain.

#include "besselforge/specfun.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace besselforge::kernels {

enum class Family { cd_u, hat, rescaled, bessel_tw, modified_bessel };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

struct KernelSpec {
  Family family = Family::rescaled;
  int n = 1;      // ignored by the two Bessel families
  double s = 0.0;

  /// Throws DomainError unless s > -1 and (for the Jacobi families) n >= 1.
  void validate() const;
  bool has_degree() const { return family != Family::bessel_tw && family != Family::modified_bessel; }
};

double cd_kernel(int n, double s, double u1, double u2);
/// cd_kernel in the edge coordinates t = 1 - u in (0, 2); keeps the t^s
/// weight exact where 1 - u would round to 0.
double cd_kernel_edge(int n, double s, double t1, double t2);

/// Representation-switching evaluation: sum form near the diagonal
/// (|l1 - l2| < 1e-6 max(1, l1)), two-term Christoffel-Darboux form elsewhere.
double hat_kernel(int n, double s, double lam1, double lam2);
double hat_kernel_sum(int n, double s, double lam1, double lam2);
double hat_kernel_cd(int n, double s, double lam1, double lam2);

double rescaled_kernel(int n, double s, double x1, double x2);

/// (1/4) int_0^1 J_s(sqrt(t y1)) J_s(sqrt(t y2)) dt.
double bessel_kernel_tw(double s, double y1, double y2);
/// Quadrature route only (any argument size; slow for large arguments).
double bessel_kernel_tw_quadrature(double s, double y1, double y2);
/// Closed Lommel route: [a J_{s+1}(a) J_s(b) - b J_s(a) J_{s+1}(b)] / (2(a^2-b^2)),
/// a = sqrt(y1), b = sqrt(y2); falls back to the diagonal formula when a == b.
double bessel_kernel_tw_closed(double s, double y1, double y2);

double modified_bessel_kernel(double s, double x1, double x2);

/// Row-major matrix of bessel_kernel_tw(s, y_i, y_j), the same values as the
/// entrywise call, with Bessel evaluations shared across rows.
std::vector<double> bessel_tw_matrix(double s, std::span<const double> y);

/// Orthonormal functions whose Gram sum is the kernel:
///   K(x1, x2) = sum_l phi_l(x1) phi_l(x2).
/// Defined for the three Jacobi families only.
std::vector<double> features(const KernelSpec& spec, double x);

double evaluate(const KernelSpec& spec, double x1, double x2);
double diagonal(const KernelSpec& spec, double x);

/// n (n^2 x + 1)^{-(alpha+1)/2} P_n^{(alpha,0)}((n^2 x - 1)/(n^2 x + 1)).
double heine_mehler_scaled(int n, double alpha, double x);
/// J_alpha(2 / sqrt(x)) / sqrt(x), the n -> inf limit of heine_mehler_scaled.
double heine_mehler_limit(double alpha, double x);
/// |heine_mehler_scaled - heine_mehler_limit|.
double heine_mehler_residual(int n, double alpha, double x);
/// (n^2 x + 1)^alpha / n^{2 alpha}; tends to x^alpha.
double scale_prefactor(int n, double alpha, double x);

/// A quadrature value together with its doubled-resolution recomputation.
struct MassEstimate {
  double value = 0.0;
  double refined = 0.0;
  double discrepancy() const;
};

/// int_R^{x_max} K(x, x) dx on a geometric grid with the resolution of `grid`.
MassEstimate tail_mass(const KernelSpec& spec, double R, const specfun::GridSpec& grid = {});
/// int_{x_min}^{delta} x K(x, x) dx.
MassEstimate zero_mass(const KernelSpec& spec, double delta, const specfun::GridSpec& grid = {});

} // namespace besselforge::kernels
