#include "besselforge/operators.hpp"

#include "besselforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace besselforge::operators {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using specfun::QuadratureGrid;

namespace {

VectorXd sqrt_weights(const QuadratureGrid& grid) {
  VectorXd w(static_cast<Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) w[static_cast<Index>(i)] = std::sqrt(grid.weights[i]);
  return w;
}

bool same_grid(const QuadratureGrid& a, const QuadratureGrid& b) {
  return a.nodes == b.nodes && a.weights == b.weights;
}

void require_same_grid(const DiscreteOperator& a, const DiscreteOperator& b) {
  if (!same_grid(a.grid, b.grid) || a.size() != b.size())
    throw UsageError("operators live on different grids");
}

Eigen::SelfAdjointEigenSolver<MatrixXd> eigen_of(const MatrixXd& m, bool vectors) {
  const MatrixXd sym = 0.5 * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(sym, vectors ? Eigen::ComputeEigenvectors
                                                              : Eigen::EigenvaluesOnly);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SubspaceBasis make_raw(const QuadratureGrid& grid, Index cols) {
  SubspaceBasis b;
  b.grid = grid;
  b.functions = MatrixXd::Zero(static_cast<Index>(grid.size()), cols);
  b.labels.reserve(static_cast<std::size_t>(cols));
  return b;
}

} // namespace

DiscreteOperator discretize(const kernels::KernelSpec& kernel, const QuadratureGrid& grid) {
  kernel.validate();
  const Index N = static_cast<Index>(grid.size());
  const VectorXd sw = sqrt_weights(grid);
  DiscreteOperator op;
  op.grid = grid;
  if (kernel.has_degree()) {
    MatrixXd phi(N, kernel.n);
    for (Index i = 0; i < N; ++i) {
      const auto f = kernels::features(kernel, grid.nodes[static_cast<std::size_t>(i)]);
      for (int l = 0; l < kernel.n; ++l) phi(i, l) = sw[i] * f[static_cast<std::size_t>(l)];
    }
    op.matrix = phi * phi.transpose();
    return op;
  }
  std::vector<double> y(grid.nodes);
  const bool modified = kernel.family == kernels::Family::modified_bessel;
  if (modified)
    for (auto& v : y) {
      if (!(v > 0.0)) throw DomainError("modified_bessel_kernel: arguments must be positive");
      v = 4.0 / v;
    }
  const auto flat = kernels::bessel_tw_matrix(kernel.s, y);
  op.matrix.resize(N, N);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j) {
      double v = flat[static_cast<std::size_t>(i * N + j)];
      if (modified) v *= y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] / 4.0;
      op.matrix(i, j) = sw[i] * v * sw[j];
    }
  return op;
}

DiscreteOperator discretize(const std::function<double(double, double)>& kernel, const QuadratureGrid& grid) {
  const Index N = static_cast<Index>(grid.size());
  const VectorXd sw = sqrt_weights(grid);
  DiscreteOperator op{MatrixXd(N, N), grid};
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j <= i; ++j) {
      const double v = sw[i] * kernel(grid.nodes[static_cast<std::size_t>(i)], grid.nodes[static_cast<std::size_t>(j)]) * sw[j];
      op.matrix(i, j) = v;
      op.matrix(j, i) = v;
    }
  return op;
}

int n_shift(double s) {
  if (s > -1.0) throw DomainError("n_shift: defined only for s <= -1");
  int k = 1;
  while (!(s + 2.0 * k > -1.0)) ++k;
  return k;
}

SubspaceBasis orthonormalize(const SubspaceBasis& raw, double tol) {
  SubspaceBasis out;
  out.grid = raw.grid;
  out.orthonormal = true;
  out.labels = raw.labels;
  if (raw.functions.cols() == 0) {
    out.functions = MatrixXd::Zero(raw.functions.rows(), 0);
    return out;
  }
  MatrixXd a = raw.functions;
  for (Index j = 0; j < a.cols(); ++j) {
    const double norm = a.col(j).norm();
    if (norm > 0.0) a.col(j) /= norm;
  }
  Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeThinU);
  const VectorXd& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  Index rank = 0;
  for (Index j = 0; j < sv.size(); ++j) {
    out.singular_profile.push_back(top > 0.0 ? sv[j] / top : 0.0);
    if (top > 0.0 && sv[j] > tol * top) ++rank;
  }
  out.functions = svd.matrixU().leftCols(rank);
  return out;
}

SubspaceBasis h_space_family(int n, double s, const QuadratureGrid& grid, bool rescaled) {
  if (n < 1) throw DomainError("h_space_basis: n must be at least 1");
  const double scale = rescaled ? static_cast<double>(n) * n : 1.0;
  const VectorXd sw = sqrt_weights(grid);
  const Index N = static_cast<Index>(grid.size());

  if (s > -1.0) {
    SubspaceBasis b = make_raw(grid, n);
    for (Index i = 0; i < N; ++i) {
      const double lam = scale * grid.nodes[static_cast<std::size_t>(i)];
      const double r = (lam - 1.0) / (lam + 1.0);
      const double w = sw[i] * std::pow(lam + 1.0, -0.5 * s - 1.0);
      double t0 = 1.0, t1 = r;
      for (int l = 0; l < n; ++l) {
        const double t = l == 0 ? t0 : t1;
        b.functions(i, l) = w * t;
        if (l >= 1) {
          const double t2 = 2.0 * r * t1 - t0;
          t0 = t1;
          t1 = t2;
        }
      }
    }
    for (int l = 0; l < n; ++l) b.labels.push_back("cheb" + std::to_string(l));
    return b;
  }

  const int k = n_shift(s);
  if (n <= k) throw DomainError("h_space_basis: n must exceed n_s for s <= -1");
  const double a_v = s + 2.0 * k - 1.0;
  const double a_l = s + 2.0 * k;
  const int nv = n - k + 1;
  const int nl = n - k;
  SubspaceBasis b = make_raw(grid, nv + nl);
  for (Index i = 0; i < N; ++i) {
    const double lam = scale * grid.nodes[static_cast<std::size_t>(i)];
    const double r = (lam - 1.0) / (lam + 1.0);
    const auto pv = specfun::jacobi_p_sequence(nv - 1, a_v, r);
    const double wv = sw[i] * std::pow(lam + 1.0, -0.5 * s - 1.0);
    for (int l = 0; l < nv; ++l) b.functions(i, l) = wv * pv[static_cast<std::size_t>(l)];
    if (nl > 0) {
      const auto pl = specfun::jacobi_p_sequence(nl - 1, a_l, r);
      const double wl = sw[i] * std::pow(lam + 1.0, -0.5 * a_l - 1.0);
      for (int l = 0; l < nl; ++l) b.functions(i, nv + l) = wl * pl[static_cast<std::size_t>(l)];
    }
  }
  for (int l = 0; l < nv; ++l) b.labels.push_back("V" + std::to_string(l));
  for (int l = 0; l < nl; ++l) b.labels.push_back("L" + std::to_string(l));
  return b;
}

namespace {

SubspaceBasis require_rank(SubspaceBasis basis, Index expected, const char* who) {
  if (basis.rank() != expected) {
    std::ostringstream msg;
    msg << who << ": numerical rank " << basis.rank() << " differs from " << expected
        << "; singular values:";
    for (double v : basis.singular_profile) msg << ' ' << fmt(v);
    throw ConstructionError(msg.str());
  }
  return basis;
}

void apply_exp_weight(SubspaceBasis& b, double beta) {
  for (Index i = 0; i < b.functions.rows(); ++i)
    b.functions.row(i) *= std::exp(-0.5 * beta * b.grid.nodes[static_cast<std::size_t>(i)]);
}

} // namespace

SubspaceBasis h_space_basis(int n, double s, const QuadratureGrid& grid, bool rescaled) {
  return require_rank(orthonormalize(h_space_family(n, s, grid, rescaled)), n, "h_space_basis");
}

SubspaceBasis exp_weighted(const SubspaceBasis& basis, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  SubspaceBasis b = basis;
  apply_exp_weight(b, beta);
  return require_rank(orthonormalize(b), basis.rank(), "exp_weighted");
}

DiscreteOperator projector(const SubspaceBasis& basis) {
  if (!basis.orthonormal) throw UsageError("projector: basis is not orthonormal");
  return {basis.functions * basis.functions.transpose(), basis.grid};
}

SubspaceBasis weighted_basis(int n, double s, double beta, const QuadratureGrid& grid) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  SubspaceBasis raw = h_space_family(n, s, grid, true);
  apply_exp_weight(raw, beta);
  return require_rank(orthonormalize(raw), n, "weighted_projector");
}

DiscreteOperator weighted_projector(int n, double s, double beta, const QuadratureGrid& grid) {
  return projector(weighted_basis(n, s, beta, grid));
}

LimitConstruction limit_construction(double s, double beta, const QuadratureGrid& grid,
                                     double threshold) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const int k = s > -1.0 ? 0 : n_shift(s);
  const double order = s + 2.0 * k;
  const auto op = discretize({kernels::Family::modified_bessel, 1, order}, grid);
  const auto eig = eigen_of(op.matrix, true);
  const VectorXd& ev = eig.eigenvalues();
  std::vector<Index> keep;
  for (Index j = ev.size() - 1; j >= 0; --j)
    if (ev[j] > threshold) keep.push_back(j);

  const Index N = op.size();
  const Index extra = k == 0 ? 0 : k + 1;
  SubspaceBasis raw = make_raw(grid, static_cast<Index>(keep.size()) + extra);
  for (std::size_t c = 0; c < keep.size(); ++c) {
    raw.functions.col(static_cast<Index>(c)) = eig.eigenvectors().col(keep[c]);
    raw.labels.push_back("bessel" + std::to_string(c));
  }
  if (k > 0) {
    const VectorXd sw = sqrt_weights(grid);
    const Index base = static_cast<Index>(keep.size());
    for (Index i = 0; i < N; ++i) {
      const double x = grid.nodes[static_cast<std::size_t>(i)];
      raw.functions(i, base) = sw[i] * std::pow(x, -0.5 * s - 1.0);
      const double root = std::sqrt(x);
      for (int j = 1; j <= k; ++j)
        raw.functions(i, base + j) =
            sw[i] * specfun::bessel_j_any_order(s + 2.0 * j - 1.0, 2.0 / root) / root;
    }
    raw.labels.push_back("power");
    for (int j = 1; j <= k; ++j) raw.labels.push_back("J" + std::to_string(j));
  }

  LimitConstruction out;
  // Weighted Bessel range alone, to measure what the augmentation adds.
  SubspaceBasis core = raw;
  core.functions = raw.functions.leftCols(static_cast<Index>(keep.size()));
  core.labels.resize(keep.size());
  apply_exp_weight(core, beta);
  out.bessel_rank = orthonormalize(core).rank();

  apply_exp_weight(raw, beta);
  out.basis = orthonormalize(raw);
  out.added_rank = out.basis.rank() - out.bessel_rank;
  if (out.basis.rank() == 0 || (k > 0 && out.added_rank < 1))
    throw ConstructionError("limit_projector: numerical rank collapse");
  return out;
}

DiscreteOperator limit_projector(double s, double beta, const QuadratureGrid& grid, double threshold) {
  return projector(limit_construction(s, beta, grid, threshold).basis);
}

double trace(const DiscreteOperator& op) { return op.matrix.trace(); }

double trace_norm(const DiscreteOperator& op) {
  if (op.size() == 0) return 0.0;
  return eigen_of(op.matrix, false).eigenvalues().cwiseAbs().sum();
}

double trace_norm_distance(const DiscreteOperator& a, const DiscreteOperator& b) {
  require_same_grid(a, b);
  return trace_norm({a.matrix - b.matrix, a.grid});
}

DiscreteOperator restrict_to(const DiscreteOperator& op, double lo, double hi) {
  std::vector<Index> idx;
  for (std::size_t i = 0; i < op.grid.size(); ++i)
    if (op.grid.nodes[i] >= lo && op.grid.nodes[i] <= hi) idx.push_back(static_cast<Index>(i));
  DiscreteOperator out;
  out.grid = op.grid.restricted(lo, hi);
  out.matrix.resize(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out.matrix(static_cast<Index>(i), static_cast<Index>(j)) = op.matrix(idx[i], idx[j]);
  return out;
}

DiscreteOperator conjugate_sqrt_f(const DiscreteOperator& op, const std::function<double(double)>& f) {
  const Index N = op.size();
  VectorXd root(N);
  for (Index i = 0; i < N; ++i) {
    const double x = op.grid.nodes[static_cast<std::size_t>(i)];
    root[i] = std::sqrt(f ? f(x) : std::min(x, 1.0));
  }
  return {root.asDiagonal() * op.matrix * root.asDiagonal(), op.grid};
}

double idempotency_defect(const DiscreteOperator& op) {
  return (op.matrix * op.matrix - op.matrix).norm();
}

std::pair<double, double> spectrum_bounds(const DiscreteOperator& op) {
  if (op.size() == 0) return {0.0, 0.0};
  const VectorXd ev = eigen_of(op.matrix, false).eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

void write_csv(const DiscreteOperator& op, std::ostream& out) {
  const Index N = op.size();
  out << "node,weight";
  for (Index j = 0; j < N; ++j) out << ",m" << j;
  out << '\n';
  for (Index i = 0; i < N; ++i) {
    out << fmt(op.grid.nodes[static_cast<std::size_t>(i)]) << ','
        << fmt(op.grid.weights[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < N; ++j) out << ',' << fmt(op.matrix(i, j));
    out << '\n';
  }
}

DiscreteOperator read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("node,weight", 0) != 0)
    throw UsageError("operator CSV: missing header");
  const Index N = static_cast<Index>(std::count(line.begin(), line.end(), ',')) - 1;
  DiscreteOperator op;
  op.matrix.resize(N, N);
  Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= N) throw UsageError("operator CSV: too many rows");
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(cells, cell, ',')) values.push_back(std::stod(cell));
    if (static_cast<Index>(values.size()) != N + 2) throw UsageError("operator CSV: ragged row");
    op.grid.nodes.push_back(values[0]);
    op.grid.weights.push_back(values[1]);
    for (Index j = 0; j < N; ++j) op.matrix(row, j) = values[static_cast<std::size_t>(j + 2)];
    ++row;
  }
  if (row != N) throw UsageError("operator CSV: expected a square matrix");
  if (N > 0) {
    op.grid.a = op.grid.nodes.front();
    op.grid.b = op.grid.nodes.back();
  }
  return op;
}

} // namespace besselforge::operators
