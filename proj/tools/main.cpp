// besselforge command-line front end. Talks to the library only through the C API.

#include "besselforge/besselforge.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitClaim = 3;
constexpr int kExitFailure = 4;

struct Flag {
  const char* key;
  const char* help;
};

// Options understood by each subcommand, forwarded verbatim to bf_config_set.
const std::map<std::string, std::vector<Flag>> kFlags = {
    {"kernel-eval",
     {{"family", "cd_u | hat | rescaled | bessel_tw | modified_bessel (default rescaled)"},
      {"n", "degree (default 1)"},
      {"s", "kernel parameter, > -1 (default 0)"},
      {"lattice", "lo:hi:count evaluation lattice (default 0.2:5:25)"}}},
    {"converge",
     {{"n", "comma-separated degrees (default 16,32,64,128)"},
      {"s", "parameter (default 0)"},
      {"beta", "weight exp(-beta x) (default 1)"},
      {"grid", "xmin:xmax:ppd:k projector grid (default 1e-7:40:8:16)"},
      {"lattice", "lo:hi:count kernel lattice; lo..hi is also the local window (default 0.2:5:25)"},
      {"parts", "all | kernel | projector (default all)"}}},
    {"tails",
     {{"n", "comma-separated degrees (default 8,16,32,64,128)"},
      {"s", "parameter, > -1 (default 0)"},
      {"r", "comma-separated tail cut points R (default 1,2,...,4096)"},
      {"delta", "comma-separated zero cut points (default 2^-16,...,1)"},
      {"bound", "uniform bound to certify (default 0.05)"},
      {"grid", "xmin:xmax:ppd:k integration range and resolution (default 1e-12:1e12:8:16)"}}},
    {"sample",
     {{"n", "rank (default 8)"},
      {"s", "parameter (default 0.5)"},
      {"beta", "sample the exp(-beta x)-weighted ensemble instead (needed for s <= -1)"},
      {"grid", "xmin:xmax:ppd:k atom grid; panels are the histogram bins (default 1e-6:1e4:2:20)"},
      {"samples", "number of samples (default 20000)"},
      {"seed", "seed (default 1)"}}},
    {"hellinger",
     {{"n", "largest n (default 10000)"},
      {"s", "first parameter (default 0)"},
      {"s2", "second parameter (default 1)"}}},
    {"orbital",
     {{"n", "comma-separated matrix sizes (default 16,32)"},
      {"m", "corner size (default 1)"},
      {"t", "comma-separated values of tr(zeta*zeta) tr(z*z) / n^2 (default 1e-3,...,1)"},
      {"samples", "Monte Carlo trials per point (default 10000)"},
      {"bound", "threshold for |1 - A| (default 0.1)"},
      {"seed", "seed (default 1)"}}},
};

int exit_for(bf_status st) {
  switch (st) {
    case BF_OK: return 0;
    case BF_ERR_USAGE: return kExitUsage;
    case BF_ERR_DOMAIN: return kExitDomain;
    default: return kExitFailure;
  }
}

bool write_text(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return std::fflush(stdout) == 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi/Bessel kernel, projector, sampling and Hellinger studies"};
  app.set_version_flag("--version", std::string(bf_version()));
  app.require_subcommand(1);

  std::string out_path, format = "csv", summary_path, dump_path, threads;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::App*> subs;

  for (const auto& [name, flags] : kFlags) {
    CLI::App* sub = app.add_subcommand(name);
    subs[name] = sub;
    for (const auto& f : flags)
      sub->add_option(std::string("--") + f.key, values[name + "." + f.key], f.help);
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "csv | json (default csv)")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--summary", summary_path, "also write the JSON summary to this file");
    sub->add_option("--threads", threads, "worker threads (overrides BESSELFORGE_THREADS)");
    if (name == "sample") sub->add_option("--dump", dump_path, "write every sample as sample_id,point CSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  bf_config* cfg = nullptr;
  bf_status st = bf_config_new(command.c_str(), &cfg);
  auto fail = [&](bf_status code) {
    std::cerr << "besselforge " << command << ": " << bf_last_error() << '\n';
    bf_config_free(cfg);
    return exit_for(code);
  };
  if (st != BF_OK) return fail(st);
  CLI::App* sub = subs[command];
  for (const auto& f : kFlags.at(command)) {
    if (sub->count(std::string("--") + f.key) == 0) continue;
    st = bf_config_set(cfg, f.key, values[command + "." + f.key].c_str());
    if (st != BF_OK) return fail(st);
  }
  if (!threads.empty() && (st = bf_config_set(cfg, "threads", threads.c_str())) != BF_OK) return fail(st);
  if (!dump_path.empty() && (st = bf_config_set(cfg, "dump", "1")) != BF_OK) return fail(st);

  bf_result* result = nullptr;
  st = bf_run(cfg, &result);
  if (st != BF_OK) return fail(st);
  bf_config_free(cfg);

  const bool ok = write_text(out_path, format == "json" ? bf_result_document_json(result) : bf_result_csv(result)) &&
                  (summary_path.empty() || write_text(summary_path, bf_result_summary_json(result))) &&
                  (dump_path.empty() || write_text(dump_path, bf_result_attachment(result, "samples")));
  const int claims = bf_result_claims_hold(result);
  bf_result_free(result);
  if (!ok) {
    std::cerr << "besselforge " << command << ": could not write output\n";
    return kExitFailure;
  }
  if (!claims) {
    std::cerr << "besselforge " << command << ": a checked claim did not hold (see summary)\n";
    return kExitClaim;
  }
  return 0;
}
