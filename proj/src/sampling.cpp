#include "besselforge/sampling.hpp"

#include "besselforge/error.hpp"
#include "besselforge/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace besselforge::sampling {

using Eigen::Index;

Rng substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace {

double uniform01(Rng& rng) { return std::generate_canonical<double, 64>(rng); }

double gaussian(Rng& rng) {
  std::normal_distribution<double> normal;
  return normal(rng);
}

} // namespace

std::vector<Index> sample_dpp_atoms(const operators::SubspaceBasis& basis, Rng& rng) {
  if (!basis.orthonormal) throw UsageError("sample_dpp: basis must be orthonormal");
  const Index rank = basis.rank();
  if (rank < 1) throw UsageError("sample_dpp: rank must be at least 1");
  Eigen::MatrixXd phi = basis.functions;
  Eigen::VectorXd density = phi.rowwise().squaredNorm();
  std::vector<Index> atoms;
  atoms.reserve(static_cast<std::size_t>(rank));
  for (Index step = 0; step < rank; ++step) {
    double total = 0.0;
    for (Index i = 0; i < density.size(); ++i) {
      if (density[i] < -1e-10) throw NumericalError("sample_dpp: negative conditional density");
      if (density[i] < 0.0) density[i] = 0.0;
      total += density[i];
    }
    if (!(total > 0.0)) throw NumericalError("sample_dpp: conditional density vanished");
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    Index pick = density.size() - 1;
    for (Index i = 0; i < density.size(); ++i) {
      acc += density[i];
      if (target < acc && density[i] > 0.0) {
        pick = i;
        break;
      }
    }
    while (density[pick] <= 0.0) --pick;
    atoms.push_back(pick);
    // Deflate: remove the direction of the chosen row from the column space.
    const Eigen::VectorXd e = phi.row(pick).transpose().normalized();
    const Eigen::VectorXd proj = phi * e;
    phi -= proj * e.transpose();
    density -= proj.cwiseAbs2();
    density[pick] = 0.0;
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

Configuration sample_dpp(const operators::SubspaceBasis& basis, Rng& rng) {
  Configuration c;
  for (Index i : sample_dpp_atoms(basis, rng)) c.points.push_back(basis.grid.nodes[static_cast<std::size_t>(i)]);
  return c;
}

std::vector<Configuration> sample_dpp_many(const operators::SubspaceBasis& basis, std::size_t count,
                                           std::uint64_t seed, unsigned threads) {
  std::vector<Configuration> out(count);
  parallel_for(count, threads, [&](std::size_t k) {
    Rng rng = substream(seed, k);
    out[k] = sample_dpp(basis, rng);
  });
  return out;
}

Eigen::MatrixXcd sample_haar_unitary(int n, Rng& rng) {
  if (n < 1) throw DomainError("sample_haar_unitary: n must be at least 1");
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = {gaussian(rng), gaussian(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

namespace {

// First m rows of a Haar unitary: Gram-Schmidt of an m x n complex Gaussian.
Eigen::MatrixXcd haar_rows(Index m, Index n, Rng& rng) {
  Eigen::MatrixXcd a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = {gaussian(rng), gaussian(rng)};
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < i; ++k) a.row(i) -= a.row(k).dot(a.row(i)) * a.row(k);
    a.row(i) /= a.row(i).norm();
  }
  return a;
}

} // namespace

ComplexEstimate orbital_average(const Eigen::MatrixXcd& zeta, const Eigen::MatrixXcd& z,
                                std::size_t trials, std::uint64_t seed, unsigned threads) {
  const Index m = zeta.rows();
  const Index n = z.rows();
  if (zeta.cols() != m || z.cols() != n) throw UsageError("orbital_average: matrices must be square");
  if (m > n) throw UsageError("orbital_average: zeta must not be larger than z");
  if (trials < 1) throw UsageError("orbital_average: trials must be at least 1");
  std::vector<std::complex<double>> values(trials);
  parallel_for(trials, threads, [&](std::size_t k) {
    Rng rng = substream(seed, k);
    const Eigen::MatrixXcd u1 = haar_rows(m, n, rng);
    const Eigen::MatrixXcd u2 = haar_rows(m, n, rng);
    // (u1 z u2^{-1})_{m x m} = U1[:m, :] z U2[:m, :]^*
    const Eigen::MatrixXcd corner = u1 * z * u2.adjoint();
    const double phase = (zeta.adjoint() * corner).trace().real();
    values[k] = std::polar(1.0, phase);
  });
  std::complex<double> sum = 0.0;
  for (const auto& v : values) sum += v;
  ComplexEstimate est;
  est.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    double var = 0.0;
    for (const auto& v : values) var += std::norm(v - est.mean);
    var /= static_cast<double>(trials - 1);
    est.stderr_ = std::sqrt(var / static_cast<double>(trials));
  }
  return est;
}

pickrell::PickrellPoint radial_point(const Eigen::MatrixXcd& z) {
  const Index n = z.rows();
  if (z.cols() != n) throw UsageError("radial_point: matrix must be square");
  pickrell::PickrellPoint omega;
  if (n == 0) return omega;
  const double n2 = static_cast<double>(n) * n;
  const Eigen::MatrixXcd gram = z.adjoint() * z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("radial_point: eigen-solve failed");
  omega.gamma = gram.trace().real() / n2;
  for (Index i = n - 1; i >= 0; --i) omega.xs.push_back(std::max(0.0, eig.eigenvalues()[i]) / n2);
  return omega;
}

std::vector<HistogramBin> empirical_intensity(const std::vector<Configuration>& samples,
                                              const std::vector<double>& edges) {
  if (samples.empty()) throw UsageError("empirical_intensity: no samples");
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw UsageError("empirical_intensity: bin edges must be strictly increasing");
  const std::size_t bins = edges.size() - 1;
  std::vector<double> sum(bins, 0.0), sumsq(bins, 0.0);
  std::vector<double> counts(bins);
  for (const auto& c : samples) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (double x : c.points) {
      if (x < edges.front() || x >= edges.back()) continue;
      const auto it = std::upper_bound(edges.begin(), edges.end(), x);
      counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
    }
    for (std::size_t b = 0; b < bins; ++b) {
      sum[b] += counts[b];
      sumsq[b] += counts[b] * counts[b];
    }
  }
  const double m = static_cast<double>(samples.size());
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double mean = sum[b] / m;
    const double var = m > 1 ? std::max(0.0, (sumsq[b] - m * mean * mean) / (m - 1)) : 0.0;
    out[b] = {edges[b], edges[b + 1], mean, std::sqrt(var / m)};
  }
  return out;
}

Estimate laplace_functional(const std::vector<Configuration>& samples,
                            const std::function<double(double)>& g) {
  if (samples.empty()) throw UsageError("laplace_functional: no samples");
  double sum = 0.0, sumsq = 0.0;
  for (const auto& c : samples) {
    double prod = 1.0;
    for (double x : c.points) {
      const double v = g(x);
      if (!(v > 0.0 && v <= 1.0)) throw UsageError("laplace_functional: g must take values in (0, 1]");
      prod *= v;
    }
    sum += prod;
    sumsq += prod * prod;
  }
  const double m = static_cast<double>(samples.size());
  Estimate e;
  e.mean = sum / m;
  if (m > 1) e.stderr_ = std::sqrt(std::max(0.0, (sumsq - m * e.mean * e.mean) / (m - 1)) / m);
  return e;
}

} // namespace besselforge::sampling
