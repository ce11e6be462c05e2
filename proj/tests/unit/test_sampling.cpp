#include "besselforge/error.hpp"
#include "besselforge/sampling.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace besselforge;
using namespace besselforge::sampling;
using operators::SubspaceBasis;
using specfun::halfline_grid;

namespace {

// Single normalized function e^{-x/2} on a half-line grid: one point with density e^{-x}.
SubspaceBasis exponential_basis() {
  SubspaceBasis b;
  b.grid = halfline_grid(1e-8, 60.0, 8, 16);
  b.orthonormal = true;
  b.functions.resize(static_cast<Eigen::Index>(b.grid.size()), 1);
  for (std::size_t i = 0; i < b.grid.size(); ++i)
    b.functions(static_cast<Eigen::Index>(i), 0) = std::sqrt(b.grid.weights[i]) * std::exp(-0.5 * b.grid.nodes[i]);
  b.functions.col(0).normalize();
  return b;
}

Eigen::MatrixXcd ginibre(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = {g(rng), g(rng)};
  return z;
}

} // namespace

TEST_CASE("substreams are reproducible and distinct") {
  auto a = substream(42, 7), b = substream(42, 7), c = substream(42, 8), d = substream(43, 7);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  CHECK(va != d());
}

TEST_CASE("sample_dpp: rank one exponential law") {
  const auto basis = exponential_basis();
  const auto samples = sample_dpp_many(basis, 100000, 3);
  double sum = 0.0;
  for (const auto& c : samples) {
    REQUIRE(c.points.size() == 1);
    sum += c.points[0];
  }
  const double mean = sum / static_cast<double>(samples.size());
  CHECK(std::fabs(mean - 1.0) < 3.0 / std::sqrt(100000.0));
}

TEST_CASE("sample_dpp: cardinality equals the rank") {
  const auto grid = halfline_grid(1e-6, 1e4, 2, 20);
  const auto basis = operators::h_space_basis(8, 0.5, grid, true);
  for (const auto& c : sample_dpp_many(basis, 500, 9)) {
    REQUIRE(c.points.size() == 8);
    CHECK(std::is_sorted(c.points.begin(), c.points.end()));
    CHECK(std::adjacent_find(c.points.begin(), c.points.end()) == c.points.end());
  }
}

TEST_CASE("sample_dpp: rank two on six atoms matches enumeration") {
  SubspaceBasis b;
  b.grid = specfun::legendre_grid(1, 6, 0.0, 3.0);
  b.orthonormal = true;
  Eigen::MatrixXd raw(6, 2);
  for (int i = 0; i < 6; ++i) {
    const double x = b.grid.nodes[static_cast<std::size_t>(i)];
    raw(i, 0) = std::sqrt(b.grid.weights[static_cast<std::size_t>(i)]) * std::exp(-x);
    raw(i, 1) = std::sqrt(b.grid.weights[static_cast<std::size_t>(i)]) * std::cos(2.0 * x);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  b.functions = qr.householderQ() * Eigen::MatrixXd::Identity(6, 2);
  const Eigen::MatrixXd K = b.functions * b.functions.transpose();

  std::map<std::pair<Eigen::Index, Eigen::Index>, double> prob;
  double total = 0.0;
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = i + 1; j < 6; ++j) {
      prob[{i, j}] = K(i, i) * K(j, j) - K(i, j) * K(j, i);
      total += prob[{i, j}];
    }
  CHECK(std::fabs(total - 1.0) < 1e-12);

  const int draws = 100000;
  std::map<std::pair<Eigen::Index, Eigen::Index>, int> seen;
  for (int k = 0; k < draws; ++k) {
    auto rng = substream(77, static_cast<std::uint64_t>(k));
    auto atoms = sample_dpp_atoms(b, rng);
    REQUIRE(atoms.size() == 2);
    std::sort(atoms.begin(), atoms.end());
    ++seen[{atoms[0], atoms[1]}];
  }
  double chi2 = 0.0;
  int cells = 0;
  for (const auto& [key, p] : prob) {
    if (p < 1e-12) continue;
    const double expect = p * draws;
    const double diff = seen[key] - expect;
    chi2 += diff * diff / expect;
    ++cells;
  }
  const double pvalue = boost::math::gamma_q(0.5 * (cells - 1), 0.5 * chi2);
  INFO("chi2=" << chi2 << " cells=" << cells);
  CHECK(pvalue > 1e-3);
}

TEST_CASE("sample_dpp: argument checks") {
  auto basis = exponential_basis();
  auto rng = substream(1, 0);
  basis.orthonormal = false;
  CHECK_THROWS_AS(sample_dpp(basis, rng), UsageError);
  basis.orthonormal = true;
  basis.functions.resize(basis.functions.rows(), 0);
  CHECK_THROWS_AS(sample_dpp(basis, rng), UsageError);
}

TEST_CASE("sample_dpp_many does not depend on the thread count") {
  const auto grid = halfline_grid(1e-6, 1e4, 2, 20);
  const auto basis = operators::weighted_basis(6, -1.5, 1.0, grid);
  const auto one = sample_dpp_many(basis, 300, 5, 1);
  const auto three = sample_dpp_many(basis, 300, 5, 3);
  REQUIRE(one.size() == three.size());
  for (std::size_t k = 0; k < one.size(); ++k) CHECK(one[k].points == three[k].points);
}

TEST_CASE("sample_haar_unitary") {
  auto rng = substream(11, 0);
  const auto u = sample_haar_unitary(8, rng);
  CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);

  const int draws = 100000;
  double s1 = 0.0, s2 = 0.0;
  std::complex<double> m{0.0, 0.0};
  double mr2 = 0.0, mi2 = 0.0;
  for (int k = 0; k < draws; ++k) {
    auto r = substream(12, static_cast<std::uint64_t>(k));
    const auto v = sample_haar_unitary(8, r);
    const double a = std::norm(v(0, 0));
    s1 += a;
    s2 += a * a;
    m += v(0, 0);
    mr2 += v(0, 0).real() * v(0, 0).real();
    mi2 += v(0, 0).imag() * v(0, 0).imag();
  }
  const double mean = s1 / draws;
  const double se = std::sqrt((s2 / draws - mean * mean) / draws);
  CHECK(std::fabs(mean - 0.125) < 3.0 * se);
  m /= draws;
  CHECK(std::fabs(m.real()) < 3.0 * std::sqrt(mr2 / draws / draws));
  CHECK(std::fabs(m.imag()) < 3.0 * std::sqrt(mi2 / draws / draws));
  CHECK_THROWS_AS(sample_haar_unitary(0, rng), DomainError);
}

TEST_CASE("orbital_average") {
  auto rng = substream(21, 0);
  const auto z = ginibre(16, rng);
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(1, 1);
  const auto e0 = orbital_average(zero, z, 200, 1);
  CHECK(e0.mean == std::complex<double>(1.0, 0.0));
  CHECK(e0.stderr_ == 0.0);

  // tr(zeta^* zeta) tr(z^* z) = 0.01 n^2
  const double zz = z.squaredNorm();
  Eigen::MatrixXcd zeta(1, 1);
  zeta(0, 0) = std::sqrt(0.01 * 256.0 / zz);
  const auto e = orbital_average(zeta, z, 10000, 2);
  CHECK(std::abs(e.mean) <= 1.0 + 3.0 * e.stderr_);
  CHECK(std::abs(1.0 - e.mean) < 0.1);

  const auto u = sample_haar_unitary(16, rng);
  const auto v = sample_haar_unitary(16, rng);
  zeta(0, 0) = std::sqrt(0.5 * 256.0 / zz);
  const auto a = orbital_average(zeta, z, 10000, 3);
  const auto b = orbital_average(zeta, u * z * v, 10000, 4);
  CHECK(std::abs(a.mean - b.mean) < 3.0 * std::hypot(a.stderr_, b.stderr_));

  const Eigen::MatrixXcd big = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(orbital_average(big, Eigen::MatrixXcd::Identity(2, 2), 10, 1), UsageError);
  CHECK_THROWS_AS(orbital_average(zeta, z, 0, 1), UsageError);
}

TEST_CASE("orbital_average does not depend on the thread count") {
  auto rng = substream(22, 0);
  const auto z = ginibre(8, rng);
  Eigen::MatrixXcd zeta = Eigen::MatrixXcd::Identity(2, 2) * 0.3;
  const auto a = orbital_average(zeta, z, 500, 9, 1);
  const auto b = orbital_average(zeta, z, 500, 9, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("radial_point") {
  const auto id = radial_point(Eigen::MatrixXcd::Identity(4, 4));
  CHECK(id.gamma == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(id.xs.size() == 4);
  for (double x : id.xs) CHECK(x == doctest::Approx(1.0 / 16.0).epsilon(1e-14));

  const auto zero = radial_point(Eigen::MatrixXcd::Zero(3, 3));
  CHECK(zero.gamma == 0.0);
  for (double x : zero.xs) CHECK(std::fabs(x) < 1e-15);

  auto rng = substream(31, 0);
  const auto z = ginibre(10, rng);
  const auto p = radial_point(z);
  double sum = 0.0;
  for (double x : p.xs) sum += x;
  CHECK(std::fabs(sum - p.gamma) < 1e-10);
  CHECK(std::is_sorted(p.xs.rbegin(), p.xs.rend()));
  CHECK(std::fabs(p.deficiency()) < 1e-10);

  const auto u = sample_haar_unitary(10, rng);
  const auto v = sample_haar_unitary(10, rng);
  const auto q = radial_point(u * z * v);
  REQUIRE(q.xs.size() == p.xs.size());
  for (std::size_t i = 0; i < p.xs.size(); ++i) CHECK(std::fabs(q.xs[i] - p.xs[i]) < 1e-10);
  CHECK_THROWS_AS(radial_point(Eigen::MatrixXcd::Zero(2, 3)), UsageError);
}

TEST_CASE("empirical_intensity") {
  std::vector<Configuration> samples{{{0.5, 1.5}}, {{0.25}}, {{2.5, 2.7}}};
  const auto bins = empirical_intensity(samples, {0.0, 1.0, 2.0, 3.0});
  REQUIRE(bins.size() == 3);
  CHECK(bins[0].mean_count == doctest::Approx(2.0 / 3.0));
  CHECK(bins[1].mean_count == doctest::Approx(1.0 / 3.0));
  CHECK(bins[2].mean_count == doctest::Approx(2.0 / 3.0));
  CHECK(bins[0].stderr_ > 0.0);
  CHECK_THROWS_AS(empirical_intensity(samples, {0.0, 2.0, 1.0}), UsageError);
  CHECK_THROWS_AS(empirical_intensity({}, {0.0, 1.0}), UsageError);
}

TEST_CASE("laplace_functional") {
  const auto basis = exponential_basis();
  const auto samples = sample_dpp_many(basis, 100000, 41);
  const auto one = laplace_functional(samples, [](double) { return 1.0; });
  CHECK(one.mean == 1.0);
  CHECK(one.stderr_ == 0.0);

  const auto half = laplace_functional(samples, [](double x) { return std::exp(-x); });
  CHECK(std::fabs(half.mean - 0.5) < 3.0 * half.stderr_);

  const auto other = laplace_functional(sample_dpp_many(basis, 100000, 42), [](double x) { return std::exp(-x); });
  CHECK(std::fabs(half.mean - other.mean) < 3.0 * std::hypot(half.stderr_, other.stderr_));

  CHECK_THROWS_AS(laplace_functional(samples, [](double) { return 1.5; }), UsageError);
  CHECK_THROWS_AS(laplace_functional(samples, [](double) { return 0.0; }), UsageError);
}

TEST_CASE("multiplicative functional against the operator determinant") {
  // For a projection DPP with kernel F F^T, E prod g(x_i) = det(F^T diag(g) F).
  const auto grid = halfline_grid(1e-6, 1e4, 2, 20);
  const auto basis = operators::h_space_basis(8, 0.5, grid, true);
  const double beta = 1.0;
  Eigen::VectorXd g(basis.functions.rows());
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = std::exp(-beta * grid.nodes[static_cast<std::size_t>(i)]);
  const double exact = (basis.functions.transpose() * g.asDiagonal() * basis.functions).determinant();

  const auto samples = sample_dpp_many(basis, 20000, 51);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& c : samples) {
    const double v = pickrell::psi_mult(c.points, beta);
    s1 += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = s1 / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  INFO("exact=" << exact << " mc=" << mean << " se=" << se);
  CHECK(std::fabs(mean - exact) < 3.0 * se);
}
