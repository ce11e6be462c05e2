#include "besselforge/pickrell.hpp"

#include "besselforge/error.hpp"
#include "besselforge/parallel.hpp"
#include "besselforge/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace besselforge::pickrell {

void PickrellPoint::validate() const {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0.0)) throw DomainError("pickrell point: coordinates must be nonnegative");
    if (i > 0 && xs[i] > xs[i - 1]) throw DomainError("pickrell point: coordinates must be nonincreasing");
  }
  if (!(gamma >= 0.0)) throw DomainError("pickrell point: gamma must be nonnegative");
  if (deficiency() < -1e-10) throw DomainError("pickrell point: gamma is below the sum of coordinates");
}

double PickrellPoint::deficiency() const {
  return gamma - std::accumulate(xs.begin(), xs.end(), 0.0);
}

AtomicMeasure sigma_f(const PickrellPoint& omega, const std::function<double(double)>& f) {
  omega.validate();
  AtomicMeasure eta;
  for (double x : omega.xs)
    if (x > 0.0) eta.atoms.emplace_back(x, f(x));
  return eta;
}

AtomicMeasure s_map(const PickrellPoint& omega) {
  return sigma_f(omega, [](double x) { return std::min(x, 1.0); });
}

PickrellPoint s_inverse(const AtomicMeasure& eta) {
  PickrellPoint omega;
  for (const auto& [loc, mass] : eta.atoms) {
    if (!(loc > 0.0) || std::fabs(mass - std::min(loc, 1.0)) > 1e-9)
      throw DomainError("s_inverse: measure is not in the image of s (mass must equal min(location, 1))");
    omega.xs.push_back(loc);
  }
  std::sort(omega.xs.begin(), omega.xs.end(), std::greater<>());
  omega.gamma = std::accumulate(omega.xs.begin(), omega.xs.end(), 0.0);
  return omega;
}

bool in_omega_p_R(const PickrellPoint& omega, double R) {
  omega.validate();
  double mins = 0.0;
  for (double x : omega.xs) mins += std::min(x, 1.0);
  return omega.gamma <= R && mins <= R;
}

double psi_mult(std::span<const double> points, double beta) {
  if (!(beta > 0.0)) throw DomainError("psi_mult: beta must be positive");
  double sum = 0.0;
  for (double x : points) sum += x;
  return std::exp(-beta * sum);
}

namespace {

void require_hellinger(int n, double s, double s2) {
  if (!(n + s > 1.0 && n + s2 > 1.0))
    throw DomainError("hellinger: need n + s > 1 and n + s2 > 1");
}

} // namespace

double hellinger_log(int n, double s, double s2) {
  require_hellinger(n, s, s2);
  auto delta = [&](double t) { return specfun::log_gamma_balanced(t, s, s2); };
  return 0.5 * delta(2.0 * n - 1.0) + 0.5 * delta(2.0 * n) - delta(n);
}

double hellinger_exact(int n, double s, double s2) { return std::exp(hellinger_log(n, s, s2)); }

double hellinger_gap(int n, double s, double s2) { return 0.0 - std::expm1(hellinger_log(n, s, s2)); }

double log_r_integral(double p, double q) {
  if (!(p > -1.0 && q > p + 1.0)) throw DomainError("r integral diverges: need q > p + 1 > 0");
  // r = e^t: integrand exp(a t - q ln(1 + e^t)), a = p + 1, peaked at t* = ln(a / (q - a)).
  const double a = p + 1.0;
  const double b = q - a;
  const double peak = std::log(a / b);
  auto f = [&](double t) {
    const double softplus = t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    return a * t - q * softplus;
  };
  const double top = f(peak);
  const double width = std::max(12.0 * std::sqrt(q / (a * b)), 60.0 / std::min(a, b));
  const auto grid = specfun::legendre_grid(96, 16, peak - width, peak + width);
  return top + std::log(grid.integrate([&](double t) { return std::exp(f(t) - top); }));
}

double hellinger_oracle(int n, double s, double s2) {
  require_hellinger(n, s, s2);
  if (n < 2) throw DomainError("hellinger_oracle: needs n >= 2");
  const double sigma = 0.5 * (s + s2);
  // log B(x, y) = log int r^{x-1} (1+r)^{-(x+y)} dr
  auto log_beta = [](double x, double y) { return log_r_integral(x - 1.0, x + y); };
  const double cross = log_beta(n - 1.0, n + sigma) + log_beta(n, n + sigma);
  const double norm = log_beta(n - 1.0, n + s) + log_beta(n - 1.0, n + s2) + log_beta(n, n + s) +
                      log_beta(n, n + s2);
  return std::exp(cross - 0.5 * norm);
}

int first_valid_n(double s, double s2) {
  int n = 1;
  while (!(n + s > 1.0 && n + s2 > 1.0)) ++n;
  return n;
}

HellingerReport kakutani_scan(double s, double s2, int n_max, unsigned threads) {
  HellingerReport rep;
  rep.s = s;
  rep.s2 = s2;
  rep.candidate_difference = (s - s2) * (s - s2) / 8.0;
  rep.candidate_sum = (s + s2) * (s + s2) / 8.0;
  const int n0 = first_valid_n(s, s2);
  if (n_max < n0) return rep;
  const std::size_t count = static_cast<std::size_t>(n_max - n0 + 1);
  rep.per_n.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const int n = n0 + static_cast<int>(i);
    const double lh = hellinger_log(n, s, s2);
    rep.per_n[i] = {n, std::exp(lh), 0.0 - std::expm1(lh), 0.0};
  });
  double sum = 0.0;
  for (auto& row : rep.per_n) {
    sum += row.one_minus_hel;
    row.partial_sum = sum;
  }
  auto c_at = [&](int n) {
    const auto& row = rep.per_n[static_cast<std::size_t>(n - n0)];
    return n * row.one_minus_hel;
  };
  rep.raw_c = c_at(n_max);
  rep.fitted_c = n_max / 2 >= n0 ? 2.0 * rep.raw_c - c_at(n_max / 2) : rep.raw_c;

  // Least squares of S(N) on ln N over the top decade.
  const int lo = std::max(n0, n_max / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int m = 0;
  for (int n = lo; n <= n_max; ++n) {
    const double x = std::log(static_cast<double>(n));
    const double y = rep.per_n[static_cast<std::size_t>(n - n0)].partial_sum;
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    ++m;
  }
  if (m >= 3) {
    const double vx = sxx - sx * sx / m;
    const double vy = syy - sy * sy / m;
    const double cxy = sxy - sx * sy / m;
    if (vx > 0.0) {
      rep.slope = cxy / vx;
      rep.intercept = (sy - rep.slope * sx) / m;
      rep.r_squared = vy > 0.0 ? cxy * cxy / (vx * vy) : 0.0;
    }
  }
  const bool diverges = rep.r_squared > 0.99 && rep.slope > 0.0 && rep.fitted_c > 0.0 &&
                        std::fabs(rep.slope - rep.fitted_c) <= 0.1 * rep.fitted_c;
  rep.verdict = s == s2 ? "equal" : diverges ? "singular" : "not-decided";
  return rep;
}

} // namespace besselforge::pickrell
