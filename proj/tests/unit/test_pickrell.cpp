#include "besselforge/error.hpp"
#include "besselforge/pickrell.hpp"
#include "oracle_values.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace besselforge;
using namespace besselforge::pickrell;

TEST_CASE("PickrellPoint validation") {
  CHECK_NOTHROW((PickrellPoint{3.0, {2.0, 0.5}}.validate()));
  CHECK_THROWS_AS((PickrellPoint{3.0, {0.5, 2.0}}.validate()), DomainError);
  CHECK_THROWS_AS((PickrellPoint{2.0, {2.0, 0.5}}.validate()), DomainError);
  CHECK_THROWS_AS((PickrellPoint{3.0, {2.0, -0.5}}.validate()), DomainError);
  CHECK(PickrellPoint{3.0, {2.0, 0.5}}.deficiency() == doctest::Approx(0.5));
}

TEST_CASE("s_map") {
  CHECK(s_map(PickrellPoint{}).atoms.empty());
  const auto eta = s_map(PickrellPoint{2.5, {2.0, 0.5}});
  REQUIRE(eta.atoms.size() == 2);
  CHECK(eta.atoms[0] == std::pair{2.0, 1.0});
  CHECK(eta.atoms[1] == std::pair{0.5, 0.5});
  CHECK(s_map(PickrellPoint{1.0, {1.0, 0.0}}).atoms.size() == 1);
  const auto sq = sigma_f(PickrellPoint{2.5, {2.0, 0.5}}, [](double x) { return x * x; });
  CHECK(sq.atoms[0].second == 4.0);
  CHECK(sq.atoms[1].second == 0.25);
}

TEST_CASE("s_inverse") {
  const auto empty = s_inverse(AtomicMeasure{});
  CHECK(empty.gamma == 0.0);
  CHECK(empty.xs.empty());
  const auto w = s_inverse(AtomicMeasure{{{0.5, 0.5}, {2.0, 1.0}}});
  CHECK(w.gamma == 2.5);
  CHECK(w.xs == std::vector<double>{2.0, 0.5});
  CHECK_THROWS_AS(s_inverse(AtomicMeasure{{{2.0, 0.7}}}), DomainError);
}

TEST_CASE("s_inverse inverts s_map on the equality stratum") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> ex(0.7);
  for (int k = 0; k < 50; ++k) {
    PickrellPoint p;
    for (int i = 0; i < 1 + k % 7; ++i) p.xs.push_back(ex(rng));
    std::sort(p.xs.rbegin(), p.xs.rend());
    for (double x : p.xs) p.gamma += x;
    const auto back = s_inverse(s_map(p));
    REQUIRE(back.xs.size() == p.xs.size());
    CHECK(std::fabs(back.gamma - p.gamma) <= 1e-12 * std::max(1.0, p.gamma));
    for (std::size_t i = 0; i < p.xs.size(); ++i) CHECK(std::fabs(back.xs[i] - p.xs[i]) <= 1e-12);
  }
}

TEST_CASE("in_omega_p_R") {
  CHECK(in_omega_p_R(PickrellPoint{}, 0.0));
  const PickrellPoint p{3.0, {2.0, 0.5}};
  CHECK(in_omega_p_R(p, 3.0));
  CHECK_FALSE(in_omega_p_R(p, 2.9));
  CHECK_FALSE(in_omega_p_R(p, 1.4));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    PickrellPoint q{0.0, {u(rng), u(rng)}};
    std::sort(q.xs.rbegin(), q.xs.rend());
    q.gamma = q.xs[0] + q.xs[1] + u(rng);
    const double r1 = u(rng) * 3.0, r2 = r1 + u(rng);
    if (in_omega_p_R(q, r1)) CHECK(in_omega_p_R(q, r2));
  }
}

TEST_CASE("psi_mult") {
  CHECK(psi_mult({}, 1.0) == 1.0);
  const std::vector<double> pts{1.0, 2.0};
  CHECK(psi_mult(pts, 1.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(psi_mult(pts, 0.0), DomainError);
}

TEST_CASE("hellinger_exact: identities") {
  CHECK(hellinger_exact(7, 0.3, 0.3) == 1.0);
  CHECK(hellinger_gap(7, 0.3, 0.3) == 0.0);
  for (int n : {2, 5, 40, 1000})
    for (auto [s, s2] : {std::pair{0.0, 1.0}, std::pair{-0.5, 0.5}, std::pair{2.0, 3.0}, std::pair{0.3, -0.7}}) {
      if (n + s <= 1.0 || n + s2 <= 1.0) continue;
      CHECK(std::fabs(hellinger_exact(n, s, s2) - hellinger_exact(n, s2, s)) <= 1e-14);
      CHECK(hellinger_exact(n, s, s2) < 1.0);
      CHECK(hellinger_exact(n, s, s2) > 0.0);
    }
  CHECK_THROWS_AS(hellinger_exact(1, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(hellinger_exact(2, -1.5, 1.0), DomainError);
}

TEST_CASE("hellinger_exact: strictly below one on a lattice") {
  for (double s = -0.9; s <= 3.0; s += 0.3)
    for (double s2 = -0.9; s2 <= 3.0; s2 += 0.3) {
      if (std::fabs(s - s2) < 1e-9) continue;
      CHECK(hellinger_gap(5, s, s2) > 0.0);
    }
}

TEST_CASE("hellinger_gap: oracle table") {
  for (const auto& e : oracle::kHellingerGap) {
    INFO("n=" << e.a << " s=" << e.b << " s2=" << e.c);
    CHECK(std::fabs(hellinger_gap(static_cast<int>(e.a), e.b, e.c) - e.value) <= 1e-12 * e.value);
  }
}

TEST_CASE("hellinger_oracle agrees with the closed formula") {
  for (int n : {5, 10, 50, 1000})
    for (auto [s, s2] : {std::pair{0.0, 1.0}, std::pair{-0.5, 0.5}, std::pair{2.0, 3.0}}) {
      const double a = hellinger_exact(n, s, s2), b = hellinger_oracle(n, s, s2);
      CHECK(std::fabs(a - b) <= 1e-10 * a);
    }
  CHECK(std::fabs(hellinger_oracle(12, 0.4, 0.4) - 1.0) < 1e-12);
  CHECK_THROWS_AS(hellinger_oracle(1, 0.5, 0.5), DomainError);
}

TEST_CASE("log_r_integral is a Beta function") {
  for (int n : {1, 3, 10, 200}) {
    const double expect = std::lgamma(n) + std::lgamma(n + 1.0) - std::lgamma(2.0 * n + 1.0);
    CHECK(std::fabs(log_r_integral(n - 1.0, 2.0 * n + 1.0) - expect) < 1e-12 * std::max(1.0, std::fabs(expect)));
  }
}

TEST_CASE("first_valid_n") {
  CHECK(first_valid_n(0.0, 1.0) == 2);
  CHECK(first_valid_n(0.5, 0.5) == 1);
  CHECK(first_valid_n(-0.9, 0.0) == 2);
  CHECK(first_valid_n(-3.2, 0.0) == 5);
}

TEST_CASE("kakutani_scan: distinct parameters are singular") {
  const auto r = kakutani_scan(0.0, 1.0, 10000);
  CHECK(r.verdict == "singular");
  CHECK(r.r_squared > 0.99);
  CHECK(r.slope > 0.0);
  CHECK(r.candidate_difference == 0.125);
  CHECK(r.candidate_sum == 0.125);
  CHECK(std::fabs(r.fitted_c - 0.125) < 1e-3);
  CHECK(std::fabs(r.slope - r.fitted_c) < 0.1 * r.fitted_c);
  REQUIRE(r.per_n.front().n == 2);
  REQUIRE(r.per_n.back().n == 10000);
  for (std::size_t i = 1; i < r.per_n.size(); ++i) CHECK(r.per_n[i].partial_sum >= r.per_n[i - 1].partial_sum);
}

TEST_CASE("kakutani_scan: the two candidate coefficients separate") {
  const auto r = kakutani_scan(1.0, 2.0, 10000);
  CHECK(r.candidate_difference == 0.125);
  CHECK(r.candidate_sum == 1.125);
  CHECK(std::fabs(r.fitted_c - r.candidate_difference) < 1e-3);
  CHECK(r.verdict == "singular");
}

TEST_CASE("kakutani_scan: equal parameters") {
  const auto r = kakutani_scan(0.3, 0.3, 2000);
  CHECK(r.verdict == "equal");
  for (const auto& row : r.per_n) {
    CHECK(row.one_minus_hel == 0.0);
    CHECK_FALSE(std::signbit(row.one_minus_hel));
    CHECK(row.partial_sum == 0.0);
  }
}

TEST_CASE("kakutani_scan does not depend on the thread count") {
  const auto a = kakutani_scan(-0.5, 0.5, 3000, 1);
  const auto b = kakutani_scan(-0.5, 0.5, 3000, 3);
  REQUIRE(a.per_n.size() == b.per_n.size());
  for (std::size_t i = 0; i < a.per_n.size(); ++i) CHECK(a.per_n[i].partial_sum == b.per_n[i].partial_sum);
  CHECK(a.slope == b.slope);
}
