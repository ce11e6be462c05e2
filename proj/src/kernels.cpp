#include "besselforge/kernels.hpp"

#include "besselforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace besselforge::kernels {

using specfun::bessel_j;
using specfun::jacobi_p_sequence;

namespace {

// Arguments sqrt(y) up to this size use the t-quadrature; beyond it the
// integrand oscillates too fast and the closed Lommel form takes over.
constexpr double kQuadratureArgLimit = 30.0;
// Closed form: |sqrt(y1) - sqrt(y2)| below this uses the diagonal formula at
// the midpoint (error O(h^2)); above it cancellation costs < 1e-10 relative.
constexpr double kClosedDiagonalGap = 1e-5;
constexpr double kHatDiagonalSwitch = 1e-6;

void require_s(double s, const char* who) {
  if (!(s > -1.0)) throw DomainError(std::string(who) + ": s must exceed -1");
}

void require_positive(double a, double b, const char* who) {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError(std::string(who) + ": arguments must be positive and finite");
}

void require_n(int n, const char* who) {
  if (n < 1) throw DomainError(std::string(who) + ": n must be at least 1");
}

// Rule for int_0^1 g(tau) d tau with g ~ tau^{2s+1} * smooth near 0: analytic
// piece on [0, tau0], one geometric panel per decade up to 1/8, then uniform
// panels of width 1/8.
struct TauRule {
  double tau0 = 1e-8;
  std::vector<double> nodes;
  std::vector<double> weights;

  TauRule() {
    std::vector<double> t, w;
    specfun::gauss_legendre(16, t, w);
    auto panel = [&](double lo, double hi) {
      for (std::size_t j = 0; j < t.size(); ++j) {
        nodes.push_back(0.5 * (hi + lo) + 0.5 * (hi - lo) * t[j]);
        weights.push_back(0.5 * (hi - lo) * w[j]);
      }
    };
    double lo = tau0;
    while (lo < 0.125) {
      const double hi = std::min(lo * 10.0, 0.125);
      panel(lo, hi);
      lo = hi;
    }
    for (int p = 1; p < 8; ++p) panel(p / 8.0, (p + 1) / 8.0);
  }
};

const TauRule& tau_rule() {
  static const TauRule rule;
  return rule;
}

// (1/2) int_0^{tau0} tau J_s(tau a) J_s(tau b) dtau by the leading power term.
double tau_endpoint_piece(double s, double a, double b, double tau0) {
  const double lg = std::lgamma(s + 1.0);
  const double log_coef = s * std::log(a * b / 4.0) - 2.0 * lg + (2.0 * s + 2.0) * std::log(tau0);
  return 0.5 * std::exp(log_coef) / (2.0 * s + 2.0);
}

double tw_diagonal_closed(double s, double a) {
  const double js = bessel_j(s, a);
  const double js1 = bessel_j(s + 1.0, a);
  return 0.25 * (js * js + js1 * js1 - (2.0 * s / a) * js * js1);
}

} // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::cd_u: return "cd_u";
    case Family::hat: return "hat";
    case Family::rescaled: return "rescaled";
    case Family::bessel_tw: return "bessel_tw";
    case Family::modified_bessel: return "modified_bessel";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::cd_u, Family::hat, Family::rescaled, Family::bessel_tw,
                   Family::modified_bessel}) {
    if (family_name(f) == name) return f;
  }
  throw UsageError("unknown kernel family '" + std::string(name) +
                   "' (expected cd_u, hat, rescaled, bessel_tw or modified_bessel)");
}

void KernelSpec::validate() const {
  require_s(s, "kernel");
  if (has_degree()) require_n(n, "kernel");
}

namespace {

double cd_from(int n, double s, double u1, double u2, double t1, double t2) {
  const auto p1 = jacobi_p_sequence(n - 1, s, u1);
  const auto p2 = jacobi_p_sequence(n - 1, s, u2);
  double sum = 0.0;
  for (int l = 0; l < n; ++l) sum += (2.0 * l + s + 1.0) * p1[l] * p2[l];
  return sum * std::pow(t1 * t2, 0.5 * s) / std::pow(2.0, s + 1.0);
}

} // namespace

double cd_kernel(int n, double s, double u1, double u2) {
  require_s(s, "cd_kernel");
  require_n(n, "cd_kernel");
  if (!(std::fabs(u1) < 1.0 && std::fabs(u2) < 1.0))
    throw DomainError("cd_kernel: u must lie strictly inside (-1, 1)");
  return cd_from(n, s, u1, u2, 1.0 - u1, 1.0 - u2);
}

double cd_kernel_edge(int n, double s, double t1, double t2) {
  require_s(s, "cd_kernel");
  require_n(n, "cd_kernel");
  if (!(t1 > 0.0 && t1 < 2.0 && t2 > 0.0 && t2 < 2.0))
    throw DomainError("cd_kernel_edge: t must lie strictly inside (0, 2)");
  return cd_from(n, s, 1.0 - t1, 1.0 - t2, t1, t2);
}

double hat_kernel_sum(int n, double s, double lam1, double lam2) {
  require_s(s, "hat_kernel");
  require_n(n, "hat_kernel");
  require_positive(lam1, lam2, "hat_kernel");
  const double r1 = (lam1 - 1.0) / (lam1 + 1.0);
  const double r2 = (lam2 - 1.0) / (lam2 + 1.0);
  const auto p1 = jacobi_p_sequence(n - 1, s, r1);
  const auto p2 = jacobi_p_sequence(n - 1, s, r2);
  double sum = 0.0;
  for (int l = 0; l < n; ++l) sum += (2.0 * l + s + 1.0) * p1[l] * p2[l];
  const double e = -0.5 * s - 1.0;
  return sum * std::pow(1.0 + lam1, e) * std::pow(1.0 + lam2, e);
}

double hat_kernel_cd(int n, double s, double lam1, double lam2) {
  require_s(s, "hat_kernel");
  require_n(n, "hat_kernel");
  require_positive(lam1, lam2, "hat_kernel");
  if (lam1 == lam2) throw DomainError("hat_kernel_cd: two-term form is undefined on the diagonal");
  const double r1 = (lam1 - 1.0) / (lam1 + 1.0);
  const double r2 = (lam2 - 1.0) / (lam2 + 1.0);
  const auto p1 = jacobi_p_sequence(n, s, r1);
  const auto p2 = jacobi_p_sequence(n, s, r2);
  const double numer = p1[n] * p2[n - 1] - p2[n] * p1[n - 1];
  const double pref = n * (n + s) / (2.0 * n + s);
  const double e = -0.5 * s;
  return pref * std::pow(1.0 + lam1, e) * std::pow(1.0 + lam2, e) * numer / (lam1 - lam2);
}

double hat_kernel(int n, double s, double lam1, double lam2) {
  if (std::fabs(lam1 - lam2) < kHatDiagonalSwitch * std::max(1.0, lam1))
    return hat_kernel_sum(n, s, lam1, lam2);
  return hat_kernel_cd(n, s, lam1, lam2);
}

double rescaled_kernel(int n, double s, double x1, double x2) {
  require_n(n, "rescaled_kernel");
  require_positive(x1, x2, "rescaled_kernel");
  const double n2 = static_cast<double>(n) * n;
  return n2 * hat_kernel(n, s, n2 * x1, n2 * x2);
}

double bessel_kernel_tw_quadrature(double s, double y1, double y2) {
  require_s(s, "bessel_kernel_tw");
  require_positive(y1, y2, "bessel_kernel_tw");
  const double a = std::sqrt(y1);
  const double b = std::sqrt(y2);
  const auto& rule = tau_rule();
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double tau = rule.nodes[k];
    acc += rule.weights[k] * tau * bessel_j(s, tau * a) * bessel_j(s, tau * b);
  }
  return 0.5 * acc + tau_endpoint_piece(s, a, b, rule.tau0);
}

double bessel_kernel_tw_closed(double s, double y1, double y2) {
  require_s(s, "bessel_kernel_tw");
  require_positive(y1, y2, "bessel_kernel_tw");
  const double a = std::sqrt(y1);
  const double b = std::sqrt(y2);
  if (std::fabs(a - b) <= kClosedDiagonalGap) return tw_diagonal_closed(s, 0.5 * (a + b));
  const double numer = a * bessel_j(s + 1.0, a) * bessel_j(s, b) - b * bessel_j(s, a) * bessel_j(s + 1.0, b);
  return numer / (2.0 * (a - b) * (a + b));
}

double bessel_kernel_tw(double s, double y1, double y2) {
  require_s(s, "bessel_kernel_tw");
  require_positive(y1, y2, "bessel_kernel_tw");
  if (std::max(y1, y2) <= kQuadratureArgLimit * kQuadratureArgLimit)
    return bessel_kernel_tw_quadrature(s, y1, y2);
  return bessel_kernel_tw_closed(s, y1, y2);
}

double modified_bessel_kernel(double s, double x1, double x2) {
  require_positive(x1, x2, "modified_bessel_kernel");
  return 4.0 / (x1 * x2) * bessel_kernel_tw(s, 4.0 / x1, 4.0 / x2);
}

std::vector<double> bessel_tw_matrix(double s, std::span<const double> y) {
  require_s(s, "bessel_kernel_tw");
  const std::size_t n = y.size();
  std::vector<double> root(n), js(n), js1(n);
  for (std::size_t i = 0; i < n; ++i) {
    require_positive(y[i], y[i], "bessel_kernel_tw");
    root[i] = std::sqrt(y[i]);
    js[i] = bessel_j(s, root[i]);
    js1[i] = bessel_j(s + 1.0, root[i]);
  }
  const auto& rule = tau_rule();
  const std::size_t q = rule.nodes.size();
  // tau * weight * J_s(tau a_i) for the quadrature rows; J_s(tau a_i) for the columns.
  std::vector<std::size_t> slot(n, n);
  std::vector<double> left, right;
  std::size_t small = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (root[i] > kQuadratureArgLimit) continue;
    slot[i] = small++;
    for (std::size_t k = 0; k < q; ++k) {
      const double j = bessel_j(s, rule.nodes[k] * root[i]);
      right.push_back(j);
      left.push_back(rule.weights[k] * rule.nodes[k] * j);
    }
  }
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double v;
      if (slot[i] < n && slot[j] < n) {
        const double* li = &left[slot[i] * q];
        const double* rj = &right[slot[j] * q];
        double acc = 0.0;
        for (std::size_t k = 0; k < q; ++k) acc += li[k] * rj[k];
        v = 0.5 * acc + tau_endpoint_piece(s, root[i], root[j], rule.tau0);
      } else if (std::fabs(root[i] - root[j]) <= kClosedDiagonalGap) {
        v = tw_diagonal_closed(s, 0.5 * (root[i] + root[j]));
      } else {
        const double numer = root[i] * js1[i] * js[j] - root[j] * js[i] * js1[j];
        v = numer / (2.0 * (root[i] - root[j]) * (root[i] + root[j]));
      }
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  }
  return out;
}

std::vector<double> features(const KernelSpec& spec, double x) {
  spec.validate();
  const int n = spec.n;
  const double s = spec.s;
  std::vector<double> phi(static_cast<std::size_t>(n));
  switch (spec.family) {
    case Family::cd_u: {
      if (!(std::fabs(x) < 1.0)) throw DomainError("cd_kernel: u must lie strictly inside (-1, 1)");
      const auto p = jacobi_p_sequence(n - 1, s, x);
      const double w = std::pow(1.0 - x, 0.5 * s) / std::pow(2.0, 0.5 * (s + 1.0));
      for (int l = 0; l < n; ++l) phi[l] = std::sqrt(2.0 * l + s + 1.0) * p[l] * w;
      return phi;
    }
    case Family::hat:
    case Family::rescaled: {
      if (!(x > 0.0)) throw DomainError("kernel features: argument must be positive");
      const double scale = spec.family == Family::rescaled ? static_cast<double>(n) * n : 1.0;
      const double lam = scale * x;
      const auto p = jacobi_p_sequence(n - 1, s, (lam - 1.0) / (lam + 1.0));
      const double w = std::pow(lam + 1.0, -0.5 * s - 1.0) * std::sqrt(scale);
      for (int l = 0; l < n; ++l) phi[l] = std::sqrt(2.0 * l + s + 1.0) * p[l] * w;
      return phi;
    }
    default:
      throw UsageError("kernel features exist only for the finite-rank Jacobi families");
  }
}

double evaluate(const KernelSpec& spec, double x1, double x2) {
  spec.validate();
  switch (spec.family) {
    case Family::cd_u: return cd_kernel(spec.n, spec.s, x1, x2);
    case Family::hat: return hat_kernel(spec.n, spec.s, x1, x2);
    case Family::rescaled: return rescaled_kernel(spec.n, spec.s, x1, x2);
    case Family::bessel_tw: return bessel_kernel_tw(spec.s, x1, x2);
    case Family::modified_bessel: return modified_bessel_kernel(spec.s, x1, x2);
  }
  throw UsageError("unknown kernel family");
}

double diagonal(const KernelSpec& spec, double x) { return evaluate(spec, x, x); }

double heine_mehler_scaled(int n, double alpha, double x) {
  require_n(n, "heine_mehler");
  if (!(alpha > -1.0)) throw DomainError("heine_mehler: alpha must exceed -1");
  if (!(x > 0.0)) throw DomainError("heine_mehler: x must be positive");
  const double lam = static_cast<double>(n) * n * x;
  const double p = jacobi_p_sequence(n, alpha, (lam - 1.0) / (lam + 1.0)).back();
  return n * std::pow(lam + 1.0, -0.5 * (alpha + 1.0)) * p;
}

double heine_mehler_limit(double alpha, double x) {
  if (!(x > 0.0)) throw DomainError("heine_mehler: x must be positive");
  const double root = std::sqrt(x);
  return bessel_j(alpha, 2.0 / root) / root;
}

double heine_mehler_residual(int n, double alpha, double x) {
  return std::fabs(heine_mehler_scaled(n, alpha, x) - heine_mehler_limit(alpha, x));
}

double scale_prefactor(int n, double alpha, double x) {
  require_n(n, "scale_prefactor");
  const double n2 = static_cast<double>(n) * n;
  return std::exp(alpha * (std::log(n2 * x + 1.0) - std::log(n2)));
}

double MassEstimate::discrepancy() const { return std::fabs(refined - value); }

namespace {

template <class Weighting>
MassEstimate diagonal_mass(const KernelSpec& spec, double lo, double hi,
                           const specfun::GridSpec& grid, Weighting weight) {
  spec.validate();
  if (!(hi > lo)) return {};
  auto run = [&](int ppd, int k) {
    const auto g = specfun::halfline_grid(lo, hi, ppd, k);
    return g.integrate([&](double x) { return weight(x) * diagonal(spec, x); });
  };
  MassEstimate out;
  out.value = run(grid.panels_per_decade, grid.points_per_panel);
  out.refined = run(grid.panels_per_decade, 2 * grid.points_per_panel);
  return out;
}

} // namespace

MassEstimate tail_mass(const KernelSpec& spec, double R, const specfun::GridSpec& grid) {
  if (!(R > 0.0)) throw DomainError("tail_mass: R must be positive");
  return diagonal_mass(spec, R, grid.x_max, grid, [](double) { return 1.0; });
}

MassEstimate zero_mass(const KernelSpec& spec, double delta, const specfun::GridSpec& grid) {
  if (!(delta > 0.0)) throw DomainError("zero_mass: delta must be positive");
  return diagonal_mass(spec, grid.x_min, std::min(delta, grid.x_max), grid,
                       [](double x) { return x; });
}

} // namespace besselforge::kernels
