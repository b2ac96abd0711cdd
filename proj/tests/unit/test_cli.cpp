#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "ogt/csv.hpp"
#include "ogt/errors.hpp"
#include "ogt_cli/cli.hpp"

using namespace ogt;
using namespace ogt::cli;

namespace {

const std::string kData = OGT_TEST_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// "name value" lines of a key/value report.
std::map<std::string, std::string> fields(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto sp = line.find(' ');
    if (sp != std::string::npos) m[line.substr(0, sp)] = line.substr(sp + 1);
  }
  return m;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

const char* kSmallRun = R"({"algorithm": "ogt", "graph": {"ring": {"n": 6}},
  "objective": {"synth_quadratic": {"n": 6, "kappa": 5, "seed": 2}},
  "params": {"explicit": {"alpha": 0.1, "tau": 0.4, "eta": 0.1, "beta": 0.01, "p": 0.5}},
  "seed": 3, "stopping": {"max_iters": 60}, "record_every": 20})";

}  // namespace

TEST_CASE("version") {
  const Outcome o = call({"--version"});
  CHECK(o.code == kExitOk);
  CHECK(o.out.find("3bf4e7994e96b7c8") != std::string::npos);
  CHECK(o.out.find(version_string()) != std::string::npos);
}

TEST_CASE("usage errors") {
  Outcome o = call({});
  CHECK(o.code == kExitUsage);
  CHECK(o.err.find("Usage") != std::string::npos);
  o = call({"spectral", "--ring", "5", "--nope"});
  CHECK(o.code == kExitUsage);
  CHECK(o.err.find("--nope") != std::string::npos);
  CHECK(o.err.find("--psd") != std::string::npos);
  o = call({"spectral"});
  CHECK(o.code == kExitUsage);
  o = call({"spectral", "--ring", "5", "--file", "w.txt"});
  CHECK(o.code == kExitUsage);
  o = call({"verify-lca"});
  CHECK(o.code == kExitUsage);
  o = call({"plot", "a.csv", "--x", "time"});
  CHECK(o.code != kExitOk);
}

TEST_CASE("help lists flags with defaults") {
  const Outcome o = call({"verify-lca", "--help"});
  CHECK(o.code == kExitOk);
  CHECK(o.out.find("--kmax") != std::string::npos);
  CHECK(o.out.find("2000") != std::string::npos);
  CHECK(o.out.find("10001") != std::string::npos);
  const Outcome f = call({"fig1", "--help"});
  for (const char* flag : {"--desk", "--out-dir", "--max-iters", "--seed"}) CHECK(f.out.find(flag) != std::string::npos);
  const Outcome p = call({"plot", "--help"});
  CHECK(p.out.find("plot.svg") != std::string::npos);
  CHECK(p.out.find("rounds") != std::string::npos);
}

TEST_CASE("spectral of the 200-ring") {
  const Outcome o = call({"spectral", "--ring", "200"});
  REQUIRE(o.code == kExitOk);
  const auto f = fields(o.out);
  CHECK(std::stod(f.at("n")) == 200);
  CHECK(std::stod(f.at("delta")) == doctest::Approx(2.4672e-4).epsilon(1e-4));
  CHECK(std::abs(std::stod(f.at("eta_w")) - 0.978) < 1e-3);
  for (const char* key : {"theta", "rho_w", "delta_tilde", "psd"}) CHECK(f.count(key));
}

TEST_CASE("spectral of a file graph") {
  const std::string path = "cli_w.txt";
  write_file(path, "3\n0.2 0.4 0.4\n0.4 0.2 0.4\n0.4 0.4 0.2\n");
  auto f = fields(call({"spectral", "--file", path}).out);
  CHECK(std::stod(f.at("delta")) == doctest::Approx(0.8));
  f = fields(call({"spectral", "--file", path, "--psd"}).out);
  CHECK(std::stod(f.at("delta")) == doctest::Approx(0.6));
  std::remove(path.c_str());
  CHECK(call({"spectral", "--file", "missing_w.txt"}).code == kExitDomain);
}

TEST_CASE("verify-lca") {
  Outcome o = call({"verify-lca", "--delta", "0.01", "--kmax", "2000"});
  CHECK(o.code == kExitOk);
  CHECK(o.out.find("PASS") != std::string::npos);
  CHECK(std::stod(fields(o.out).at("max_ratio")) <= 7.0);
  o = call({"verify-lca", "--delta", "1.5"});
  CHECK(o.code == kExitDomain);
}

TEST_CASE("run writes csv and summary") {
  const std::string cfg = "cli_run.json";
  write_file(cfg, kSmallRun);
  Outcome o = call({"run", cfg});
  REQUIRE(o.code == kExitOk);
  CHECK(o.out.rfind(kCsvHeader, 0) == 0);
  std::istringstream in(o.out);
  CHECK(read_csv(in, "stdout").size() == 4);

  CHECK(call({"run", cfg, "--csv", "cli_run.csv", "--summary", "cli_run_summary.json"}).code == kExitOk);
  CHECK(slurp("cli_run.csv") == o.out);
  CHECK(slurp("cli_run_summary.json").find("\"termination\"") != std::string::npos);

  setenv("OGT_SEED", "4", 1);
  const Outcome seeded = call({"run", cfg});
  unsetenv("OGT_SEED");
  CHECK(seeded.code == kExitOk);
  CHECK(seeded.out != o.out);

  for (const char* p : {"cli_run.json", "cli_run.csv", "cli_run_summary.json"}) std::remove(p);
  o = call({"run", "missing.json"});
  CHECK(o.code == kExitDomain);
  CHECK(o.err.find("missing.json") != std::string::npos);
}

TEST_CASE("plot") {
  const std::string out = "cli_plot.svg";
  const Outcome o = call({"plot", kData + "/plot_a.csv", kData + "/plot_b.csv", "--out", out});
  CHECK(o.code == kExitOk);
  CHECK(slurp(out) == slurp(kData + "/plot_golden.svg"));
  std::remove(out.c_str());
  write_file("cli_bad.csv", "k,loss\n");
  const Outcome bad = call({"plot", "cli_bad.csv", "--out", out});
  CHECK(bad.code == kExitDomain);
  CHECK(bad.err.find("cli_bad.csv:1") != std::string::npos);
  std::remove("cli_bad.csv");
}

TEST_CASE("sweep config") {
  const SweepConfig s = parse_sweep_config(R"({"algorithm": "ssgt", "sizes": [6, 10], "kappa": 20,
      "target_gap": 1e-6, "d": 3, "seed": 5, "budget_factor": 2, "mode": "independent"})");
  CHECK(s.algorithm == Algorithm::ssgt);
  CHECK(s.sizes == std::vector<int>{6, 10});
  CHECK(s.kappa == 20);
  CHECK(s.target_gap == 1e-6);
  CHECK(s.options.d == 3);
  CHECK(s.options.seed == 5);
  CHECK(s.options.budget_factor == 2);
  CHECK(s.options.mode == DrawMode::independent);
  CHECK_THROWS_AS(parse_sweep_config(R"({"sizes": [6], "speed": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"sizes": [10, 6]})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"sizes": []})"), ConfigError);

  write_file("cli_sweep.json", R"({"algorithm": "ogt", "sizes": [6, 8], "kappa": 5, "budget_factor": 0.05})");
  const Outcome o = call({"sweep", "cli_sweep.json"});
  setenv("OGT_SEED", "7x", 1);
  const Outcome bad_seed = call({"sweep", "cli_sweep.json"});
  unsetenv("OGT_SEED");
  std::remove("cli_sweep.json");
  CHECK(bad_seed.code == kExitDomain);
  CHECK(bad_seed.err.find("OGT_SEED") != std::string::npos);
  CHECK(o.code == kExitOk);
  CHECK(o.out.rfind("n,delta,delta_tilde,budget,iters_to_target\n", 0) == 0);
  CHECK(o.out.find("exponent") != std::string::npos);
}

TEST_CASE("fig1 writes one csv per run") {
  const std::string dir = "cli_fig1";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directory(dir);
  const Outcome o = call({"fig1", "--desk", "--out-dir", dir, "--max-iters", "30"});
  CHECK(o.code == kExitOk);
  for (const char* g : {"cycle", "denser"})
    for (const char* a : {"gt", "accgt", "ssgt", "ogt"}) {
      const std::string path = dir + "/" + g + "_" + a + ".csv";
      CAPTURE(path);
      CHECK(load_csv(path).back().k == 30);
    }
  CHECK(std::filesystem::exists(dir + "/summary.json"));
  std::filesystem::remove_all(dir);
  CHECK(call({"fig1"}).code == kExitDomain);
}
