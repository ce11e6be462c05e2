#include "besselforge/specfun.hpp"

#include "besselforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace besselforge::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Stirling correction sum_{k} B_{2k} / (2k (2k-1) z^{2k-1}), accurate to
// double precision for z >= 20.
double stirling_tail(double z) {
  static constexpr double c[] = {1.0 / 12.0,         -1.0 / 360.0,
                                 1.0 / 1260.0,       -1.0 / 1680.0,
                                 1.0 / 1188.0,       -691.0 / 360360.0,
                                 1.0 / 156.0,        -3617.0 / 122400.0};
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (int k = 7; k >= 0; --k) acc = acc * inv2 + c[k];
  return acc * inv;
}

} // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("log_gamma: argument must be positive and finite");
  return std::lgamma(x);
}

double log_gamma_balanced(double t, double a1, double a2) {
  const double mid = 0.5 * (a1 + a2);
  const double zmin = t + std::min({a1, a2, mid});
  if (!(zmin > 0.0))
    throw DomainError("log_gamma_balanced: all Gamma arguments must be positive");
  if (a1 == a2) return 0.0;
  if (zmin < 20.0) {
    return std::lgamma(t + a1) + std::lgamma(t + a2) - 2.0 * std::lgamma(t + mid);
  }
  // (z - 1/2) ln z - z with z = t + b: the ln t and linear parts cancel across
  // the weights (1, 1, -2), leaving (t + b - 1/2) log1p(b / t) - b, written as
  // t (log1p(x) - x) + (b - 1/2) log1p(x), x = b / t, to avoid cancelling O(b).
  auto reduced = [t](double b) {
    const double x = b / t;
    double g;
    if (std::fabs(x) < 0.1) {
      // log1p(x) - x = sum_{k >= 2} (-1)^{k+1} x^k / k
      double term = x * x, sum = 0.0;
      for (int k = 2; k < 40; ++k) {
        const double piece = (k % 2 == 0 ? -term : term) / k;
        sum += piece;
        if (std::fabs(piece) < 1e-18 * std::fabs(sum)) break;
        term *= x;
      }
      g = sum;
    } else {
      g = std::log1p(x) - x;
    }
    return t * g + (b - 0.5) * std::log1p(x);
  };
  return reduced(a1) + reduced(a2) - 2.0 * reduced(mid) +
         stirling_tail(t + a1) + stirling_tail(t + a2) - 2.0 * stirling_tail(t + mid);
}

std::vector<double> jacobi_p_sequence(int max_degree, double alpha, double u) {
  if (max_degree < 0) throw DomainError("jacobi_p: degree must be non-negative");
  if (!(alpha > -2.0)) throw DomainError("jacobi_p_sequence: alpha must exceed -2");
  std::vector<double> p(static_cast<std::size_t>(max_degree) + 1);
  p[0] = 1.0;
  if (max_degree == 0) return p;
  p[1] = 0.5 * ((alpha + 2.0) * u + alpha);
  for (int n = 2; n <= max_degree; ++n) {
    const double two_n_a = 2.0 * n + alpha;
    const double denom = 2.0 * n * (n + alpha) * (two_n_a - 2.0);
    const double c1 = (two_n_a - 1.0) * (two_n_a * (two_n_a - 2.0) * u + alpha * alpha);
    const double c2 = 2.0 * (n + alpha - 1.0) * (n - 1.0) * two_n_a;
    p[n] = (c1 * p[n - 1] - c2 * p[n - 2]) / denom;
  }
  return p;
}

double jacobi_p(int degree, double alpha, double u) {
  if (!(alpha > -1.0)) throw DomainError("jacobi_p: alpha must exceed -1");
  if (!(u >= -1.0 && u <= 1.0)) throw DomainError("jacobi_p: u must lie in [-1, 1]");
  return jacobi_p_sequence(degree, alpha, u).back();
}

namespace detail {

double bessel_switchover(double nu) { return 12.0 + 2.0 * std::fabs(nu); }

double bessel_j_series(double nu, double x) {
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw DomainError("bessel_j: J_nu(0) diverges for negative order");
  }
  using ld = long double;
  const ld q = -static_cast<ld>(x) * x / 4.0L;
  ld term = 1.0L;
  ld sum = 1.0L;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<ld>(k) * (static_cast<ld>(nu) + k));
    sum += term;
    if (k > x && std::fabs(term) < 1e-21L * std::fabs(sum)) break;
  }
  // Gamma(nu + 1) > 0 for nu > -1; lgamma is enough for the prefactor.
  const ld log_pre = static_cast<ld>(nu) * std::log(static_cast<ld>(x) / 2.0L) -
                     std::lgamma(static_cast<ld>(nu) + 1.0L);
  return static_cast<double>(std::exp(log_pre) * sum);
}

double bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (k * 8.0 * x);
    }
    const double mag = std::fabs(term);
    // Terms may grow while (2k-1)^2 < mu; after that, growth means the
    // expansion has passed its smallest term.
    const double odd_k = 2.0 * k - 1.0;
    if (mag > prev_mag && odd_k * odd_k > mu) break;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) p += sign * term;
    else q += sign * term;
    if (mag < 1e-17 * std::max(std::fabs(p), 1e-300)) break;
    if (term == 0.0) break;
    prev_mag = mag;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace detail

double bessel_j(double nu, double x) {
  if (!(nu > -1.0)) throw DomainError("bessel_j: order must exceed -1");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j: argument must be >= 0");
  if (x >= detail::bessel_switchover(nu)) return detail::bessel_j_asymptotic(nu, x);
  if (x <= 12.0 || nu < 1.0 || nu + 1.0 >= x) return detail::bessel_j_series(nu, x);
  // The series cancels badly here; step up from the fractional base orders,
  // stable while the order stays below x.
  const double base = nu - std::floor(nu);
  auto direct = [x](double order) {
    return x < detail::bessel_switchover(order) ? detail::bessel_j_series(order, x)
                                                 : detail::bessel_j_asymptotic(order, x);
  };
  double prev = direct(base);
  double cur = direct(base + 1.0);
  for (double mu = base + 1.0; mu < nu - 0.5; mu += 1.0) {
    const double next = 2.0 * mu / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return nu < base + 0.5 ? prev : cur;
}

double bessel_j_any_order(double nu, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_j_any_order: argument must be positive");
  if (nu > -1.0) return bessel_j(nu, x);
  const double rounded = std::round(nu);
  if (rounded == nu) {
    const double v = bessel_j(-nu, x);
    return (static_cast<long long>(-nu) % 2 == 0) ? v : -v;
  }
  // Recur downward J_{m-1} = (2m/x) J_m - J_{m+1} from orders in (-1, 1).
  const int steps = static_cast<int>(std::ceil(-1.0 - nu));
  double order = nu + steps;  // in (-1, 0)
  double upper = bessel_j(order + 1.0, x);
  double lower = bessel_j(order, x);
  for (int i = 0; i < steps; ++i) {
    const double next = 2.0 * order / x * lower - upper;
    upper = lower;
    lower = next;
    order -= 1.0;
  }
  return lower;
}

// ---------------------------------------------------------------------------
// Quadrature

void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights) {
  if (k < 1) throw DomainError("gauss_legendre: need at least one point");
  if (k == 1) {
    nodes = {0.0};
    weights = {2.0};
    return;
  }
  static std::mutex cache_mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(k); it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }
  // Legendre P_k and its derivative at z.
  auto legendre = [k](double z, double& deriv) {
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= k; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    deriv = k * (z * p1 - p0) / (z * z - 1.0);
    return p1;
  };
  std::vector<double> x(k), w(k);
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dz = legendre(z, dp) / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    legendre(z, dp);
    x[i] = -z;
    x[k - 1 - i] = z;
    w[i] = w[k - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  std::lock_guard lock(cache_mutex);
  cache.emplace(k, std::make_pair(x, w));
  nodes = std::move(x);
  weights = std::move(w);
}

double QuadratureGrid::integrate(const std::function<double(double)>& f) const {
  double acc = 0.0;
  double comp = 0.0;  // Kahan
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double y = weights[i] * f(nodes[i]) - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

double QuadratureGrid::total_weight() const {
  double acc = 0.0;
  for (double w : weights) acc += w;
  return acc;
}

QuadratureGrid QuadratureGrid::restricted(double lo, double hi) const {
  QuadratureGrid out;
  out.a = std::max(a, lo);
  out.b = std::min(b, hi);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= lo && nodes[i] <= hi) {
      out.nodes.push_back(nodes[i]);
      out.weights.push_back(weights[i]);
    }
  }
  return out;
}

namespace {

void append_panel(QuadratureGrid& g, double lo, double hi, const std::vector<double>& t,
                  const std::vector<double>& w) {
  const double half = 0.5 * (hi - lo);
  const double centre = 0.5 * (hi + lo);
  for (std::size_t j = 0; j < t.size(); ++j) {
    g.nodes.push_back(centre + half * t[j]);
    g.weights.push_back(half * w[j]);
  }
}

} // namespace

QuadratureGrid legendre_grid(int panels, int points_per_panel, double a, double b) {
  if (!(a < b)) throw DomainError("legendre_grid: need a < b");
  if (panels < 1 || points_per_panel < 1)
    throw DomainError("legendre_grid: panel and point counts must be positive");
  std::vector<double> t, w;
  gauss_legendre(points_per_panel, t, w);
  QuadratureGrid g;
  g.a = a;
  g.b = b;
  g.nodes.reserve(static_cast<std::size_t>(panels) * points_per_panel);
  g.weights.reserve(g.nodes.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == panels) ? b : a + (p + 1) * h;
    append_panel(g, lo, hi, t, w);
  }
  return g;
}

QuadratureGrid halfline_grid(double x_min, double x_max, int panels_per_decade,
                             int points_per_panel) {
  if (!(x_min > 0.0) || !(x_min < x_max) || !std::isfinite(x_max))
    throw DomainError("halfline_grid: need 0 < x_min < x_max < inf");
  if (panels_per_decade < 1 || points_per_panel < 1)
    throw DomainError("halfline_grid: panel and point counts must be positive");
  const double decades = std::log10(x_max / x_min);
  const int panels = std::max(1, static_cast<int>(std::ceil(decades * panels_per_decade - 1e-9)));
  std::vector<double> t, w;
  gauss_legendre(points_per_panel, t, w);
  QuadratureGrid g;
  g.a = x_min;
  g.b = x_max;
  g.nodes.reserve(static_cast<std::size_t>(panels) * points_per_panel);
  g.weights.reserve(g.nodes.capacity());
  const double ratio = std::log(x_max / x_min);
  double lo = x_min;
  for (int p = 1; p <= panels; ++p) {
    const double hi = (p == panels) ? x_max : x_min * std::exp(ratio * p / panels);
    append_panel(g, lo, hi, t, w);
    lo = hi;
  }
  return g;
}

QuadratureGrid halfline_grid(double x_min, double x_max, int panels_per_decade,
                             int points_per_panel, std::span<const double> breaks) {
  std::vector<double> cuts{x_min};
  std::vector<double> inner(breaks.begin(), breaks.end());
  std::sort(inner.begin(), inner.end());
  for (double c : inner)
    if (c > cuts.back() && c < x_max) cuts.push_back(c);
  cuts.push_back(x_max);
  QuadratureGrid g = halfline_grid(cuts[0], cuts[1], panels_per_decade, points_per_panel);
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    const auto part = halfline_grid(cuts[i], cuts[i + 1], panels_per_decade, points_per_panel);
    g.nodes.insert(g.nodes.end(), part.nodes.begin(), part.nodes.end());
    g.weights.insert(g.weights.end(), part.weights.begin(), part.weights.end());
  }
  g.b = x_max;
  return g;
}

QuadratureGrid GridSpec::build() const {
  return halfline_grid(x_min, x_max, panels_per_decade, points_per_panel);
}

QuadratureGrid GridSpec::build(std::span<const double> breaks) const {
  return halfline_grid(x_min, x_max, panels_per_decade, points_per_panel, breaks);
}

GridSpec GridSpec::refined() const {
  GridSpec out = *this;
  out.points_per_panel *= 2;
  return out;
}

std::string GridSpec::to_string() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g:%.17g:%d:%d", x_min, x_max, panels_per_decade,
                points_per_panel);
  return buf;
}

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4)
    throw UsageError("grid spec must look like xmin:xmax:ppd:k, got '" + text + "'");
  GridSpec g;
  try {
    std::size_t used = 0;
    g.x_min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    g.x_max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    g.panels_per_decade = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    g.points_per_panel = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument(parts[3]);
  } catch (const std::logic_error&) {
    throw UsageError("grid spec has a non-numeric field: '" + text + "'");
  }
  if (!(g.x_min > 0.0 && g.x_min < g.x_max) || g.panels_per_decade < 1 || g.points_per_panel < 2)
    throw UsageError("grid spec needs 0 < xmin < xmax, ppd >= 1, k >= 2: '" + text + "'");
  return g;
}

} // namespace besselforge::specfun
