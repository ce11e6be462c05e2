#pragma once

// Nystrom-discretized kernel operators and finite-rank projectors.
//
// Everything lives in "weighted coordinates": a function f on a quadrature
// grid is stored as v_i = sqrt(w_i) f(x_i), and a kernel as
// A_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j). Euclidean inner products, traces and
// trace norms of these arrays then equal the L2 quantities they discretize.

#include "besselforge/kernels.hpp"
#include "besselforge/specfun.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace besselforge::operators {

struct DiscreteOperator {
  Eigen::MatrixXd matrix;
  specfun::QuadratureGrid grid;

  Eigen::Index size() const { return matrix.rows(); }
};

struct SubspaceBasis {
  /// Column j holds sqrt(w_i) f_j(x_i).
  Eigen::MatrixXd functions;
  std::vector<std::string> labels;
  bool orthonormal = false;
  specfun::QuadratureGrid grid;
  /// Singular values (descending, scaled by the largest) of the
  /// column-normalized raw family that produced this basis; empty for raw bases.
  std::vector<double> singular_profile;

  Eigen::Index rank() const { return functions.cols(); }
};

inline constexpr double kOrthonormalizationTolerance = 1e-8;
inline constexpr double kSpectralThreshold = 0.5;

/// Weighted Nystrom matrix of the kernel on the grid.
DiscreteOperator discretize(const kernels::KernelSpec& kernel, const specfun::QuadratureGrid& grid);
/// Same for an arbitrary symmetric kernel.
DiscreteOperator discretize(const std::function<double(double, double)>& kernel,
                            const specfun::QuadratureGrid& grid);

/// Smallest positive integer k with s + 2k > -1 (defined for s <= -1).
int n_shift(double s);

/// Rank-revealing orthonormalization: SVD of the column-normalized family,
/// directions with singular value > tol * largest are kept.
SubspaceBasis orthonormalize(const SubspaceBasis& raw, double tol = kOrthonormalizationTolerance);

/// Raw spanning family of the n-dimensional space behind the Jacobi ensemble.
///
/// s > -1: (lam + 1)^{-s/2-1} T_l(r), l < n, r = (lam - 1)/(lam + 1), with
/// Chebyshev T_l standing in for the monomials r^l (same span, well conditioned).
/// s <= -1: union of the V-family (lam + 1)^{-s/2-1} P_l^{(s+2k-1,0)}(r),
/// l <= n - k, and the L-family (lam + 1)^{-(s+2k)/2-1} P_l^{(s+2k,0)}(r),
/// l < n - k, with k = n_shift(s). lam = x, or n^2 x when rescaled.
SubspaceBasis h_space_family(int n, double s, const specfun::QuadratureGrid& grid, bool rescaled);

/// Orthonormal basis of the family above; throws ConstructionError unless the
/// numerical rank is exactly n.
SubspaceBasis h_space_basis(int n, double s, const specfun::QuadratureGrid& grid, bool rescaled);

/// Multiply every basis function by e^{-beta x / 2} and re-orthonormalize.
SubspaceBasis exp_weighted(const SubspaceBasis& basis, double beta);

DiscreteOperator projector(const SubspaceBasis& orthonormal_basis);

/// Orthonormal basis of e^{-beta x/2} H^{(s,n)} (rescaled).
SubspaceBasis weighted_basis(int n, double s, double beta, const specfun::QuadratureGrid& grid);
DiscreteOperator weighted_projector(int n, double s, double beta, const specfun::QuadratureGrid& grid);

struct LimitConstruction {
  SubspaceBasis basis;        // orthonormal, weighted by e^{-beta x/2}
  Eigen::Index bessel_rank = 0;  // directions taken from the Bessel operator's spectrum
  Eigen::Index added_rank = 0;   // rank gained from the finite augmentation (s <= -1)
};

/// Orthonormal basis of the range of the limiting weighted projector: the
/// spectral range (eigenvalues > threshold) of the discretized modified Bessel
/// operator at order s (or s + 2 n_shift(s), augmented by the functions
/// x^{-s/2-1} and J_{s+2k-1}(2/sqrt x)/sqrt x, k = 1..n_shift(s), when s <= -1),
/// weighted by e^{-beta x/2}.
LimitConstruction limit_construction(double s, double beta, const specfun::QuadratureGrid& grid,
                                     double threshold = kSpectralThreshold);
DiscreteOperator limit_projector(double s, double beta, const specfun::QuadratureGrid& grid,
                                 double threshold = kSpectralThreshold);

double trace(const DiscreteOperator& op);
/// Sum of singular values; the matrix is symmetric, so |eigenvalues|.
double trace_norm(const DiscreteOperator& op);
double trace_norm_distance(const DiscreteOperator& a, const DiscreteOperator& b);

/// Compression to the nodes in [lo, hi].
DiscreteOperator restrict_to(const DiscreteOperator& op, double lo, double hi);

/// sqrt(f) K sqrt(f), default f(x) = min(x, 1).
DiscreteOperator conjugate_sqrt_f(const DiscreteOperator& op,
                                  const std::function<double(double)>& f = {});

/// ||A^2 - A||_F.
double idempotency_defect(const DiscreteOperator& op);
/// Smallest and largest eigenvalue.
std::pair<double, double> spectrum_bounds(const DiscreteOperator& op);

/// Flat CSV dump: header "node,weight,m0,...,m{N-1}", then one row per node
/// holding the node, its weight and the matrix row.
void write_csv(const DiscreteOperator& op, std::ostream& out);
DiscreteOperator read_csv(std::istream& in);

} // namespace besselforge::operators
