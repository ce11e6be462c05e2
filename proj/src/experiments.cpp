#include "besselforge/experiments.hpp"

#include "besselforge/error.hpp"
#include "besselforge/kernels.hpp"
#include "besselforge/operators.hpp"
#include "besselforge/parallel.hpp"
#include "besselforge/pickrell.hpp"
#include "besselforge/sampling.hpp"
#include "besselforge/table.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>

namespace besselforge::experiments {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands = {"kernel-eval", "converge", "tails",
                                            "sample",      "hellinger", "orbital"};

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v))
    throw UsageError("--" + std::string(key) + ": expected a number, got '" + s + "'");
  return v;
}

long long parse_integer(std::string_view key, std::string_view text) {
  long long v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw UsageError("--" + std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(key, part));
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json cell_value(const std::string& cell) {
  if (cell == "nan" || cell == "inf" || cell == "-inf") return nullptr;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (!cell.empty() && *end == '\0') {
    if (cell.find_first_of(".eE") == std::string::npos) return std::stoll(cell);
    return v;
  }
  return cell;
}

json config_json(const ExperimentConfig& cfg) {
  json c;
  c["seed"] = cfg.seed;
  if (cfg.family) c["family"] = *cfg.family;
  if (cfg.n) c["n"] = *cfg.n;
  if (cfg.s) c["s"] = *cfg.s;
  if (cfg.s2) c["s2"] = *cfg.s2;
  if (cfg.beta) c["beta"] = *cfg.beta;
  if (cfg.grid) c["grid"] = cfg.grid->to_string();
  if (cfg.lattice) c["lattice"] = {cfg.lattice->lo, cfg.lattice->hi, cfg.lattice->count};
  if (cfg.r_list) c["r"] = *cfg.r_list;
  if (cfg.delta_list) c["delta"] = *cfg.delta_list;
  if (cfg.t_list) c["t"] = *cfg.t_list;
  if (cfg.m) c["m"] = *cfg.m;
  if (cfg.samples) c["samples"] = *cfg.samples;
  if (cfg.bound) c["bound"] = *cfg.bound;
  if (cfg.parts) c["parts"] = *cfg.parts;
  return c;
}

ExperimentResult finish(const ExperimentConfig& cfg, const Table& table, const json& summary,
                        bool claims_hold) {
  ExperimentResult r;
  r.csv = table.csv();
  r.claims_hold = claims_hold;
  r.summary_json = summary.dump(2) + "\n";
  json doc;
  doc["command"] = cfg.command;
  doc["config"] = config_json(cfg);
  doc["summary"] = summary;
  doc["columns"] = table.columns();
  json rows = json::array();
  for (const auto& row : table.rows()) {
    json jr = json::array();
    for (const auto& cell : row) jr.push_back(cell_value(cell));
    rows.push_back(std::move(jr));
  }
  doc["rows"] = std::move(rows);
  r.document_json = doc.dump(2) + "\n";
  return r;
}

std::vector<double> powers(double base, int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::pow(base, k));
  return out;
}

// --- kernel-eval -------------------------------------------------------------

ExperimentResult run_kernel_eval(const ExperimentConfig& cfg) {
  kernels::KernelSpec spec;
  spec.family = kernels::parse_family(cfg.family.value_or("rescaled"));
  spec.n = cfg.n && !cfg.n->empty() ? cfg.n->front() : 1;
  spec.s = cfg.s.value_or(0.0);
  spec.validate();
  const Lattice lat = cfg.lattice.value_or(Lattice{});
  const auto pts = lat.points();
  const std::size_t L = pts.size();
  std::vector<double> values(L * L);
  parallel_for(L, resolve_threads(cfg.threads), [&](std::size_t i) {
    for (std::size_t j = 0; j < L; ++j) values[i * L + j] = kernels::evaluate(spec, pts[i], pts[j]);
  });
  Table t({"x1", "x2", "value"});
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) t.row().add(pts[i]).add(pts[j]).add(values[i * L + j]);
  json summary;
  summary["family"] = std::string(kernels::family_name(spec.family));
  summary["n"] = spec.has_degree() ? json(spec.n) : json(nullptr);
  summary["s"] = spec.s;
  summary["rows"] = t.size();
  return finish(cfg, t, summary, true);
}

// --- converge ----------------------------------------------------------------

ExperimentResult run_converge(const ExperimentConfig& cfg) {
  const std::vector<int> ns = cfg.n.value_or(std::vector<int>{16, 32, 64, 128});
  const double s = cfg.s.value_or(0.0);
  const double beta = cfg.beta.value_or(1.0);
  const Lattice lat = cfg.lattice.value_or(Lattice{});
  const specfun::GridSpec gs = cfg.grid.value_or(specfun::GridSpec{1e-7, 40.0, 8, 16});
  const std::string parts = cfg.parts.value_or("all");
  if (parts != "all" && parts != "kernel" && parts != "projector")
    throw UsageError("--parts: expected all, kernel or projector");
  if (!(beta > 0.0)) throw DomainError("--beta must be positive");
  const bool want_kernel = parts != "projector" && s > -1.0;
  const bool want_proj = parts != "kernel";
  if (parts == "kernel" && !(s > -1.0))
    throw DomainError("closed-form kernels need s > -1; use --parts projector");
  for (int n : ns)
    if (n < 1) throw DomainError("--n values must be positive");
  const unsigned threads = resolve_threads(cfg.threads);

  const std::size_t count = ns.size();
  std::vector<double> sup(count, NAN), local(count, NAN), conj_dist(count, NAN), tr(count, NAN);
  json summary;
  if (want_kernel) {
    const auto pts = lat.points();
    std::vector<double> limit(pts.size() * pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < pts.size(); ++j)
        limit[i * pts.size() + j] = kernels::modified_bessel_kernel(s, pts[i], pts[j]);
    });
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<double> rowmax(pts.size(), 0.0);
      parallel_for(pts.size(), threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < pts.size(); ++j)
          rowmax[i] = std::max(rowmax[i], std::fabs(kernels::rescaled_kernel(ns[k], s, pts[i], pts[j]) -
                                                    limit[i * pts.size() + j]));
      });
      sup[k] = *std::max_element(rowmax.begin(), rowmax.end());
    }
  }
  if (want_proj && count > 0) {
    const double breaks[] = {lat.lo, 1.0, lat.hi};
    const auto grid = gs.build(breaks);
    const auto lim = operators::limit_construction(s, beta, grid);
    const auto P = operators::projector(lim.basis);
    summary["limit_rank"] = lim.basis.rank();
    summary["bessel_rank"] = lim.bessel_rank;
    summary["added_rank"] = lim.added_rank;
    for (std::size_t k = 0; k < count; ++k) {
      const auto Pn = operators::weighted_projector(ns[k], s, beta, grid);
      const operators::DiscreteOperator diff{Pn.matrix - P.matrix, grid};
      local[k] = operators::trace_norm(operators::restrict_to(diff, lat.lo, lat.hi));
      conj_dist[k] = operators::trace_norm(operators::conjugate_sqrt_f(diff));
      tr[k] = operators::trace(Pn);
    }
  }
  Table t({"n", "sup_lattice", "local_trace_norm", "sqrtf_trace_norm", "trace"});
  for (std::size_t k = 0; k < count; ++k) t.row().add(ns[k]).add(sup[k]).add(local[k]).add(conj_dist[k]).add(tr[k]);

  bool ok = true;
  auto claim = [&](const char* name, const std::vector<double>& v, bool active) {
    json c;
    c["computed"] = active;
    if (active) {
      json vals = json::array();
      for (double x : v) vals.push_back(number_or_null(x));
      c["values"] = vals;
      c["strictly_decreasing"] = strictly_decreasing(v);
      c["final"] = v.empty() ? json(nullptr) : number_or_null(v.back());
      ok = ok && strictly_decreasing(v);
    }
    summary[name] = c;
  };
  summary["s"] = s;
  summary["beta"] = beta;
  summary["grid"] = gs.to_string();
  summary["window"] = {lat.lo, lat.hi};
  claim("sup_lattice", sup, want_kernel);
  claim("local_trace_norm", local, want_proj);
  claim("sqrtf_trace_norm", conj_dist, want_proj);
  summary["claims_hold"] = ok;
  return finish(cfg, t, summary, ok);
}

// --- tails -------------------------------------------------------------------

ExperimentResult run_tails(const ExperimentConfig& cfg) {
  const std::vector<int> ns = cfg.n.value_or(std::vector<int>{8, 16, 32, 64, 128});
  const double s = cfg.s.value_or(0.0);
  const double bound = cfg.bound.value_or(0.05);
  const auto rs = cfg.r_list.value_or(powers(2.0, 0, 12));
  const auto ds = cfg.delta_list.value_or(powers(2.0, -16, 0));
  const specfun::GridSpec gs = cfg.grid.value_or(specfun::GridSpec{1e-12, 1e12, 8, 16});
  for (int n : ns) kernels::KernelSpec{kernels::Family::rescaled, n, s}.validate();

  struct Job {
    bool tail;
    std::size_t ni;
    double threshold;
    kernels::MassEstimate mass;
  };
  std::vector<Job> jobs;
  for (double r : rs)
    for (std::size_t i = 0; i < ns.size(); ++i) jobs.push_back({true, i, r, {}});
  for (double d : ds)
    for (std::size_t i = 0; i < ns.size(); ++i) jobs.push_back({false, i, d, {}});
  parallel_for(jobs.size(), resolve_threads(cfg.threads), [&](std::size_t k) {
    auto& job = jobs[k];
    const kernels::KernelSpec spec{kernels::Family::rescaled, ns[job.ni], s};
    job.mass = job.tail ? kernels::tail_mass(spec, job.threshold, gs) : kernels::zero_mass(spec, job.threshold, gs);
  });

  Table t({"kind", "n", "threshold", "mass", "refined"});
  json summary;
  summary["s"] = s;
  summary["bound"] = bound;
  summary["grid"] = gs.to_string();
  bool ok = true;
  auto section = [&](bool tail, const std::vector<double>& thresholds) {
    const char* kind = tail ? "tail" : "zero";
    std::optional<double> chosen;
    double chosen_sup = NAN;
    double worst_discrepancy = 0.0;
    for (double th : thresholds) {
      double supv = 0.0;
      for (const auto& job : jobs) {
        if (job.tail != tail || job.threshold != th) continue;
        t.row().add(kind).add(ns[job.ni]).add(th).add(job.mass.value).add(job.mass.refined);
        supv = std::max(supv, job.mass.value);
        worst_discrepancy = std::max(worst_discrepancy, job.mass.discrepancy());
      }
      if (ns.empty()) continue;
      t.row().add(kind).add("sup").add(th).add(supv).add("nan");
      if (supv < bound) {
        const bool better = !chosen || (tail ? th < *chosen : th > *chosen);
        if (better) {
          chosen = th;
          chosen_sup = supv;
        }
      }
    }
    json j;
    j["threshold"] = chosen ? json(*chosen) : json(nullptr);
    j["sup_mass"] = number_or_null(chosen_sup);
    j["max_refinement_discrepancy"] = worst_discrepancy;
    summary[tail ? "tail" : "zero"] = j;
    if (!ns.empty() && !chosen) ok = false;
  };
  section(true, rs);
  section(false, ds);
  summary["claims_hold"] = ok;
  return finish(cfg, t, summary, ok);
}

// --- sample ------------------------------------------------------------------

ExperimentResult run_sample(const ExperimentConfig& cfg) {
  const int n = cfg.n && !cfg.n->empty() ? cfg.n->front() : 8;
  const double s = cfg.s.value_or(0.5);
  const std::size_t count = cfg.samples.value_or(20000);
  const specfun::GridSpec gs = cfg.grid.value_or(specfun::GridSpec{1e-6, 1e4, 2, 20});
  if (count < 1) throw UsageError("--samples must be at least 1");
  const auto grid = gs.build();
  const bool weighted = cfg.beta.has_value();

  operators::SubspaceBasis basis;
  if (weighted) {
    basis = operators::weighted_basis(n, s, *cfg.beta, grid);
  } else {
    const kernels::KernelSpec spec{kernels::Family::rescaled, n, s};
    spec.validate();
    operators::SubspaceBasis raw;
    raw.grid = grid;
    raw.functions.resize(static_cast<Eigen::Index>(grid.size()), n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto f = kernels::features(spec, grid.nodes[i]);
      for (int l = 0; l < n; ++l)
        raw.functions(static_cast<Eigen::Index>(i), l) = std::sqrt(grid.weights[i]) * f[static_cast<std::size_t>(l)];
    }
    basis = operators::orthonormalize(raw);
    if (basis.rank() != n) throw ConstructionError("sample: feature basis lost rank on this grid");
  }
  const auto samples = sampling::sample_dpp_many(basis, count, cfg.seed, resolve_threads(cfg.threads));

  // Bins are the grid's geometric panels.
  const int panels = static_cast<int>(std::ceil(std::log10(gs.x_max / gs.x_min) * gs.panels_per_decade - 1e-9));
  std::vector<double> edges;
  for (int k = 0; k <= panels; ++k)
    edges.push_back(k == panels ? gs.x_max : gs.x_min * std::pow(gs.x_max / gs.x_min, static_cast<double>(k) / panels));
  const auto hist = sampling::empirical_intensity(samples, edges);

  std::vector<double> theory(hist.size(), 0.0);
  if (weighted) {
    const Eigen::VectorXd diag = basis.functions.rowwise().squaredNorm();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto it = std::upper_bound(edges.begin(), edges.end(), grid.nodes[i]);
      if (it == edges.begin() || it == edges.end()) continue;
      theory[static_cast<std::size_t>(it - edges.begin()) - 1] += diag[static_cast<Eigen::Index>(i)];
    }
  } else {
    const kernels::KernelSpec spec{kernels::Family::rescaled, n, s};
    for (std::size_t b = 0; b < hist.size(); ++b)
      theory[b] = specfun::halfline_grid(hist[b].lo, hist[b].hi, 4, 24).integrate(
          [&](double x) { return kernels::diagonal(spec, x); });
  }

  bool exact_cardinality = true;
  for (const auto& c : samples) exact_cardinality = exact_cardinality && c.points.size() == static_cast<std::size_t>(n);
  std::size_t occupied = 0, within = 0;
  Table t({"bin_lo", "bin_hi", "mean_count", "stderr", "theory"});
  for (std::size_t b = 0; b < hist.size(); ++b) {
    const auto& h = hist[b];
    t.row().add(h.lo).add(h.hi).add(h.mean_count).add(h.stderr_).add(theory[b]);
    if (h.mean_count > 0.0) {
      ++occupied;
      if (std::fabs(h.mean_count - theory[b]) <= 3.0 * h.stderr_) ++within;
    }
  }
  const double fraction = occupied ? static_cast<double>(within) / occupied : 0.0;
  const bool ok = exact_cardinality && fraction >= 0.95;
  json summary;
  summary["rank"] = n;
  summary["s"] = s;
  summary["beta"] = weighted ? json(*cfg.beta) : json(nullptr);
  summary["grid"] = gs.to_string();
  summary["atoms"] = grid.size();
  summary["samples"] = count;
  summary["seed"] = cfg.seed;
  summary["exact_cardinality"] = exact_cardinality;
  summary["occupied_bins"] = occupied;
  summary["bins_within_3sigma"] = within;
  summary["fraction_within_3sigma"] = fraction;
  summary["claims_hold"] = ok;
  ExperimentResult r = finish(cfg, t, summary, ok);
  if (cfg.dump) {
    Table d({"sample_id", "point"});
    for (std::size_t k = 0; k < samples.size(); ++k)
      for (double x : samples[k].points) d.row().add(k).add(x);
    r.attachments["samples"] = d.csv();
  }
  return r;
}

// --- hellinger ---------------------------------------------------------------

ExperimentResult run_hellinger(const ExperimentConfig& cfg) {
  const double s = cfg.s.value_or(0.0);
  const double s2 = cfg.s2.value_or(1.0);
  const int n_max = cfg.n && !cfg.n->empty() ? cfg.n->front() : 10000;
  if (n_max < 1) throw DomainError("--n must be positive");
  const auto rep = pickrell::kakutani_scan(s, s2, n_max, resolve_threads(cfg.threads));
  Table t({"n", "hel", "one_minus_hel", "partial_sum"});
  bool all_zero = true;
  for (const auto& row : rep.per_n) {
    t.row().add(row.n).add(row.hel).add(row.one_minus_hel).add(row.partial_sum);
    all_zero = all_zero && row.one_minus_hel == 0.0;
  }
  const bool ok = s == s2 ? all_zero : rep.verdict == "singular";
  json summary;
  summary["s"] = s;
  summary["s2"] = s2;
  summary["n_max"] = n_max;
  summary["first_n"] = pickrell::first_valid_n(s, s2);
  summary["raw_c"] = rep.raw_c;
  summary["fitted_c"] = rep.fitted_c;
  summary["candidate_difference"] = rep.candidate_difference;
  summary["candidate_sum"] = rep.candidate_sum;
  summary["slope"] = rep.slope;
  summary["intercept"] = rep.intercept;
  summary["r_squared"] = rep.r_squared;
  summary["verdict"] = rep.verdict;
  summary["claims_hold"] = ok;
  return finish(cfg, t, summary, ok);
}

// --- orbital -----------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  auto rng = sampling::substream(seed, tag);
  return rng();
}

ExperimentResult run_orbital(const ExperimentConfig& cfg) {
  const int m = cfg.m.value_or(1);
  const std::vector<int> ns = cfg.n.value_or(std::vector<int>{16, 32});
  auto ts = cfg.t_list.value_or(std::vector<double>{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.5, 1.0});
  std::sort(ts.begin(), ts.end());
  const std::size_t trials = cfg.samples.value_or(10000);
  const double bound = cfg.bound.value_or(0.1);
  if (m < 1) throw UsageError("--m must be at least 1");
  for (double tv : ts)
    if (!(tv >= 0.0)) throw DomainError("--t values must be nonnegative");
  const unsigned threads = resolve_threads(cfg.threads);

  Table t({"n", "t", "re", "im", "abs_one_minus", "stderr"});
  json summary;
  summary["m"] = m;
  summary["trials"] = trials;
  summary["bound"] = bound;
  json per_n = json::array();
  bool ok = true;
  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    const int n = ns[ni];
    if (m > n) throw UsageError("orbital: m must not exceed n");
    // Fixed Ginibre z with tr z^*z = n^2; zeta = sqrt(t/m) I_m, so tr(zeta^*zeta) tr(z^*z) / n^2 = t.
    auto zr = sampling::substream(derive_seed(cfg.seed, 1), static_cast<std::uint64_t>(n));
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd z(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) z(i, j) = {normal(zr), normal(zr)};
    z *= static_cast<double>(n) / z.norm();
    double delta = NAN;
    bool below = true;
    double max_stderr = 0.0;
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const double tv = ts[ti];
      const Eigen::MatrixXcd zeta = Eigen::MatrixXcd::Identity(m, m) * std::sqrt(tv / m);
      const auto est = sampling::orbital_average(zeta, z, trials,
                                                 derive_seed(cfg.seed, 1000 * (ni + 1) + ti + 2), threads);
      const double gap = std::abs(1.0 - est.mean);
      t.row().add(n).add(tv).add(est.mean.real()).add(est.mean.imag()).add(gap).add(est.stderr_);
      max_stderr = std::max(max_stderr, est.stderr_);
      if (below && gap < bound) delta = tv;
      else below = false;
    }
    json j;
    j["n"] = n;
    j["delta"] = number_or_null(delta);
    j["max_stderr"] = max_stderr;
    per_n.push_back(j);
    ok = ok && std::isfinite(delta) && max_stderr < 0.01;
  }
  summary["per_n"] = per_n;
  summary["claims_hold"] = ok;
  return finish(cfg, t, summary, ok);
}

} // namespace

std::vector<double> Lattice::points() const {
  if (count < 1) throw UsageError("lattice: count must be at least 1");
  if (count == 1) return {lo};
  if (!(hi > lo)) throw UsageError("lattice: need lo < hi");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return out;
}

Lattice Lattice::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("--lattice: expected lo:hi:count, got '" + text + "'");
  Lattice l{parse_double("lattice", parts[0]), parse_double("lattice", parts[1]),
            static_cast<int>(parse_integer("lattice", parts[2]))};
  l.points();
  return l;
}

bool is_command(std::string_view name) {
  return std::find(kCommands.begin(), kCommands.end(), name) != kCommands.end();
}

std::vector<std::string> command_names() { return kCommands; }

void set_option(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "n") {
    std::vector<int> ns;
    for (auto part : split(value, ',')) ns.push_back(static_cast<int>(parse_integer(key, part)));
    cfg.n = ns;
  } else if (key == "s") {
    cfg.s = parse_double(key, value);
  } else if (key == "s2") {
    cfg.s2 = parse_double(key, value);
  } else if (key == "beta") {
    cfg.beta = parse_double(key, value);
  } else if (key == "grid") {
    cfg.grid = specfun::GridSpec::parse(std::string(value));
  } else if (key == "lattice") {
    cfg.lattice = Lattice::parse(std::string(value));
  } else if (key == "family") {
    kernels::parse_family(value);
    cfg.family = std::string(value);
  } else if (key == "r") {
    cfg.r_list = parse_double_list(key, value);
  } else if (key == "delta") {
    cfg.delta_list = parse_double_list(key, value);
  } else if (key == "t") {
    cfg.t_list = parse_double_list(key, value);
  } else if (key == "m") {
    cfg.m = static_cast<int>(parse_integer(key, value));
  } else if (key == "samples") {
    const auto v = parse_integer(key, value);
    if (v < 1) throw UsageError("--samples must be at least 1");
    cfg.samples = static_cast<std::size_t>(v);
  } else if (key == "bound") {
    cfg.bound = parse_double(key, value);
  } else if (key == "parts") {
    cfg.parts = std::string(value);
  } else if (key == "seed") {
    const auto v = parse_integer(key, value);
    if (v < 0) throw UsageError("--seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "threads") {
    const auto v = parse_integer(key, value);
    if (v < 1) throw UsageError("--threads must be at least 1");
    cfg.threads = static_cast<int>(v);
  } else if (key == "dump") {
    cfg.dump = value == "1" || value == "true";
  } else {
    throw UsageError("unknown option '" + std::string(key) + "'");
  }
}

ExperimentResult run(const ExperimentConfig& cfg) {
  if (cfg.command == "kernel-eval") return run_kernel_eval(cfg);
  if (cfg.command == "converge") return run_converge(cfg);
  if (cfg.command == "tails") return run_tails(cfg);
  if (cfg.command == "sample") return run_sample(cfg);
  if (cfg.command == "hellinger") return run_hellinger(cfg);
  if (cfg.command == "orbital") return run_orbital(cfg);
  throw UsageError("unknown command '" + cfg.command + "'");
}

} // namespace besselforge::experiments
