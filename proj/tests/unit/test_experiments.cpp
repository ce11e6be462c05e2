#include "besselforge/error.hpp"
#include "besselforge/experiments.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>

using namespace besselforge;
using namespace besselforge::experiments;
using nlohmann::json;

namespace {

ExperimentConfig make(const std::string& command,
                      std::initializer_list<std::pair<const char*, const char*>> options) {
  ExperimentConfig cfg;
  cfg.command = command;
  for (const auto& [k, v] : options) set_option(cfg, k, v);
  return cfg;
}

std::size_t lines(const std::string& csv) { return static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')); }

std::string header(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

} // namespace

TEST_CASE("command names") {
  const auto names = command_names();
  CHECK(names.size() == 6);
  for (const auto& n : {"kernel-eval", "converge", "tails", "sample", "hellinger", "orbital"}) CHECK(is_command(n));
  CHECK_FALSE(is_command("plot"));
  ExperimentConfig cfg;
  cfg.command = "plot";
  CHECK_THROWS_AS(run(cfg), UsageError);
}

TEST_CASE("set_option parsing") {
  ExperimentConfig cfg;
  set_option(cfg, "n", "3,5,8");
  CHECK(*cfg.n == std::vector<int>{3, 5, 8});
  set_option(cfg, "s", "-0.25");
  CHECK(*cfg.s == -0.25);
  set_option(cfg, "grid", "1e-3:10:4:8");
  CHECK(cfg.grid->points_per_panel == 8);
  set_option(cfg, "lattice", "0.5:2:4");
  CHECK(cfg.lattice->points() == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  set_option(cfg, "r", "1,2.5");
  CHECK(cfg.r_list->size() == 2);
  set_option(cfg, "seed", "42");
  CHECK(cfg.seed == 42);
  set_option(cfg, "dump", "1");
  CHECK(cfg.dump);

  CHECK_THROWS_AS(set_option(cfg, "n", "3,x"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "n", "2.5"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "s", "abc"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "s", "1.5junk"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "samples", "0"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "seed", "-1"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "threads", "0"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "lattice", "1:2"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "lattice", "2:1:5"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "family", "laguerre"), UsageError);
  CHECK_THROWS_AS(set_option(cfg, "colour", "red"), UsageError);
}

TEST_CASE("kernel-eval: default lattice gives 625 rows") {
  const auto r = run(make("kernel-eval", {{"n", "4"}, {"s", "0.5"}}));
  CHECK(header(r.csv) == "x1,x2,value");
  CHECK(lines(r.csv) == 626);
  CHECK(r.claims_hold);
  const auto doc = json::parse(r.document_json);
  CHECK(doc["command"] == "kernel-eval");
  CHECK(doc["rows"].size() == 625);
  CHECK(doc["columns"].size() == 3);
}

TEST_CASE("kernel-eval: domain errors propagate") {
  CHECK_THROWS_AS(run(make("kernel-eval", {{"s", "-1"}})), DomainError);
  CHECK_THROWS_AS(run(make("kernel-eval", {{"n", "0"}})), DomainError);
}

TEST_CASE("csv floats carry 17 significant digits") {
  const auto r = run(make("kernel-eval", {{"n", "1"}, {"family", "cd_u"}, {"lattice", "0.1:0.1:1"}}));
  // cd_u with n = 1, s = 0 is 1/2
  CHECK(r.csv == "x1,x2,value\n0.10000000000000001,0.10000000000000001,0.5\n");
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  for (const char* command : {"sample", "orbital", "tails"}) {
    CAPTURE(command);
    ExperimentConfig a = make(command, {{"samples", "300"}, {"threads", "1"}});
    if (std::string(command) == "tails") a = make(command, {{"n", "8"}, {"r", "1,4"}, {"delta", "0.5"}, {"threads", "1"}});
    if (std::string(command) == "sample") set_option(a, "grid", "1e-3:1e2:1:8");
    if (std::string(command) == "orbital") set_option(a, "n", "6");
    ExperimentConfig b = a;
    set_option(b, "threads", "4");
    const auto ra = run(a), ra2 = run(a), rb = run(b);
    CHECK(ra.csv == ra2.csv);
    CHECK(ra.csv == rb.csv);
    CHECK(ra.document_json == rb.document_json);
  }
}

TEST_CASE("sample: seed changes the draw, dump attaches every sample") {
  auto cfg = make("sample", {{"n", "2"}, {"samples", "50"}, {"grid", "1e-3:1e2:1:8"}, {"dump", "1"}});
  const auto r1 = run(cfg);
  set_option(cfg, "seed", "7");
  const auto r2 = run(cfg);
  CHECK(r1.csv != r2.csv);
  REQUIRE(r1.attachments.count("samples") == 1);
  const auto& dump = r1.attachments.at("samples");
  CHECK(header(dump) == "sample_id,point");
  CHECK(lines(dump) == 1 + 50 * 2);
  const auto s = json::parse(r1.summary_json);
  CHECK(s["exact_cardinality"] == true);
}

TEST_CASE("tails: empty degree list gives a header-only table") {
  auto cfg = make("tails", {{"r", "1"}, {"delta", "1"}});
  cfg.n = std::vector<int>{};
  const auto r = run(cfg);
  CHECK(lines(r.csv) == 1);
  CHECK(header(r.csv) == "kind,n,threshold,mass,refined");
}

TEST_CASE("tails: row count") {
  const auto r = run(make("tails", {{"n", "8,16"}, {"r", "1,8,64"}, {"delta", "0.25,1"}}));
  // per n: one row per R and one per delta, plus a limit row for each
  const auto doc = json::parse(r.document_json);
  CHECK(doc["rows"].size() + 1 == lines(r.csv));
  CHECK(lines(r.csv) > 10);
}

TEST_CASE("hellinger: equal parameters give Hel = 1 and no claim") {
  const auto r = run(make("hellinger", {{"n", "50"}, {"s", "0.5"}, {"s2", "0.5"}}));
  std::istringstream in(r.csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,hel,one_minus_hel,partial_sum");
  while (std::getline(in, line)) CHECK(line.substr(line.find(',')) == ",1,0,0");
  const auto s = json::parse(r.summary_json);
  CHECK(s["verdict"] == "equal");
}

TEST_CASE("hellinger: default parameters are mutually singular") {
  const auto r = run(make("hellinger", {{"n", "2000"}}));
  const auto s = json::parse(r.summary_json);
  CHECK(r.claims_hold);
  CHECK(s["verdict"] == "singular");
  CHECK(lines(r.csv) == 2000);
}

TEST_CASE("orbital: zeta = 0 gives A = 1 exactly") {
  const auto r = run(make("orbital", {{"n", "4"}, {"samples", "20"}, {"t", "0"}}));
  CHECK(r.csv.find("4,0,1,0,0,0\n") != std::string::npos);
  CHECK_THROWS_AS(run(make("orbital", {{"n", "4"}, {"m", "5"}})), UsageError);
}

TEST_CASE("converge: single degree and bad parts") {
  const auto r = run(make("converge", {{"n", "8"}, {"parts", "kernel"}, {"lattice", "0.5:2:3"}}));
  CHECK(lines(r.csv) == 2);
  const auto s = json::parse(r.summary_json);
  CHECK(s["sup_lattice"]["values"].size() == 1);
  CHECK_THROWS_AS(run(make("converge", {{"parts", "both"}})), UsageError);
}
