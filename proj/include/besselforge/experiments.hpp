#pragma once

// The six studies behind the command-line subcommands. Each returns a CSV
// table, a JSON summary and whether the numerical claims it checks held.

#include "besselforge/specfun.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace besselforge::experiments {

struct Lattice {
  double lo = 0.2;
  double hi = 5.0;
  int count = 25;

  std::vector<double> points() const;
  static Lattice parse(const std::string& text); // "lo:hi:count"
};

struct ExperimentConfig {
  std::string command;
  std::optional<std::string> family;
  std::optional<std::vector<int>> n;
  std::optional<double> s;
  std::optional<double> s2;
  std::optional<double> beta;
  std::optional<specfun::GridSpec> grid;
  std::optional<Lattice> lattice;
  std::optional<std::vector<double>> r_list;
  std::optional<std::vector<double>> delta_list;
  std::optional<std::vector<double>> t_list;
  std::optional<int> m;
  std::optional<std::size_t> samples;
  std::optional<double> bound;
  std::optional<std::string> parts;
  std::uint64_t seed = 1;
  int threads = 0; // 0: BESSELFORGE_THREADS or hardware
  bool dump = false;
};

/// Known commands: kernel-eval, converge, tails, sample, hellinger, orbital.
bool is_command(std::string_view name);
std::vector<std::string> command_names();

/// Set one option from its textual form; keys are the long flag names without
/// dashes (n, s, s2, beta, grid, lattice, family, r, delta, t, m, samples,
/// bound, parts, seed, threads, dump). Throws UsageError.
void set_option(ExperimentConfig& cfg, std::string_view key, std::string_view value);

struct ExperimentResult {
  std::string csv;
  std::string summary_json;  // summary object only
  std::string document_json; // {command, config, summary, columns, rows}
  std::map<std::string, std::string> attachments; // e.g. "samples" -> CSV dump
  bool claims_hold = true;
};

/// Throws DomainError / UsageError / NumericalError / ConstructionError.
ExperimentResult run(const ExperimentConfig& cfg);

} // namespace besselforge::experiments
