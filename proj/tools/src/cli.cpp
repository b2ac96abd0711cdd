#include "ogt_cli/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ogt/csv.hpp"
#include "ogt/errors.hpp"
#include "ogt/rng.hpp"
#include "ogt/svg_plot.hpp"

namespace ogt::cli {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

void print_spectral(std::ostream& out, const GossipMatrix& w) {
  const double delta = spectral_gap(w);
  const SpectralConstants sc = spectral_constants(delta);
  out << "n " << w.n() << '\n'
      << "psd " << (w.psd ? "true" : "false") << '\n'
      << "delta " << g17(sc.delta) << '\n'
      << "theta " << g17(sc.theta) << '\n'
      << "eta_w " << g17(sc.eta_w) << '\n'
      << "rho_w " << g17(sc.rho_w) << '\n'
      << "delta_tilde " << g17(sc.delta_tilde) << '\n';
}

// Options shared by every subcommand, filled by CLI11.
struct Args {
  std::string config_path;
  std::string csv_out = "-";
  std::string summary_out;

  int ring = 0;
  int metropolis = 0;
  int chords = 0;
  std::uint64_t graph_seed = 0;
  std::string gossip_file;
  bool psd = false;

  double delta = 0.0;
  int kmax = 2000;
  int grid = 10001;

  std::string dataset;
  bool desk = false;
  std::string out_dir = ".";
  long max_iters = 0;
  std::uint64_t seed = 1;

  std::vector<std::string> csvs;
  std::string svg_out = "plot.svg";
  std::string x_axis = "rounds";
};

int cmd_run(const Args& a, std::ostream& out) {
  RunConfig config = load_run_config(a.config_path);
  apply_env_overrides(config);
  const RunResult result = run(config);
  if (a.csv_out == "-") {
    write_csv(out, result.records);
  } else {
    emit_csv(result, a.csv_out);
  }
  if (!a.summary_out.empty()) write_file(a.summary_out, summary_json(result) + "\n");
  return kExitOk;
}

int cmd_spectral(const Args& a, std::ostream& out) {
  GossipMatrix w;
  if (a.ring > 0) {
    w = build_ring(a.ring);
  } else if (a.metropolis > 0) {
    w = build_metropolis_lazy(a.metropolis, add_random_chords(a.metropolis, ring_edges(a.metropolis), a.chords, a.graph_seed));
  } else {
    w = load_gossip_file(a.gossip_file);
  }
  if (a.psd && !w.psd) w = make_psd(w);
  print_spectral(out, w);
  return kExitOk;
}

int cmd_verify_lca(const Args& a, std::ostream& out) {
  const LcaReport r = verify_lca(a.delta, a.kmax, a.grid);
  out << "delta " << g17(a.delta) << '\n'
      << "max_ratio " << g17(r.max_ratio) << '\n'
      << "argmax_k " << r.argmax_k << '\n'
      << "argmax_x " << g17(r.argmax_x) << '\n'
      << "bound 7\n"
      << (r.pass ? "PASS" : "FAIL") << '\n';
  return r.pass ? kExitOk : kExitDomain;
}

// Seed after the OGT_SEED override, validated the same way as for run configs.
std::uint64_t seed_with_env(std::uint64_t seed) {
  RunConfig c;
  c.seed = seed;
  apply_env_overrides(c);
  return c.seed;
}

int cmd_sweep(const Args& a, std::ostream& out) {
  SweepConfig sc = parse_sweep_config(read_file(a.config_path));
  sc.options.seed = seed_with_env(sc.options.seed);
  const auto rows = sweep_scaling(sc.algorithm, sc.sizes, sc.kappa, sc.target_gap, sc.options);
  out << "n,delta,delta_tilde,budget,iters_to_target\n";
  for (const auto& r : rows) {
    out << r.n << ',' << g17(r.delta) << ',' << g17(r.delta_tilde) << ',' << r.budget << ','
        << (r.iters_to_target ? std::to_string(*r.iters_to_target) : std::string("none")) << '\n';
  }
  const auto s = fitted_exponent(rows);
  out << "exponent " << (s ? g17(*s) : std::string("none")) << '\n';
  return kExitOk;
}

int cmd_fig1(const Args& a, std::ostream& out) {
  if (!a.desk && a.dataset.empty()) throw ConfigError("full scale needs a dataset path (or pass --desk)");
  Fig1Options opt;
  opt.seed = seed_with_env(a.seed);
  opt.max_iters = a.max_iters;
  const auto results = reproduce_fig1(a.dataset, a.desk ? Fig1Scale::desk : Fig1Scale::paper, opt);
  std::filesystem::create_directories(a.out_dir);
  json summary = json::object();
  for (const auto& [key, r] : results) {
    const std::string path = (std::filesystem::path(a.out_dir) / (key + ".csv")).string();
    emit_csv(r, path);
    summary[key] = json::parse(summary_json(r));
    out << key << " iterations " << r.iterations << " target_iteration "
        << (r.target_iteration ? std::to_string(*r.target_iteration) : std::string("none")) << " grad_evals "
        << r.grad_evals_total << '\n';
  }
  write_file((std::filesystem::path(a.out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  return kExitOk;
}

int cmd_plot(const Args& a) {
  plot(a.csvs, a.svg_out, parse_plot_axis(a.x_axis));
  return kExitOk;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("sweep config must be a JSON object");
  static const std::vector<std::string> known = {"algorithm", "sizes", "kappa",         "target_gap",
                                                 "d",         "seed",  "budget_factor", "mode"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown sweep config key '" + key + "'");
  }
  SweepConfig sc;
  try {
    if (!doc.contains("algorithm") || !doc.contains("sizes")) throw ConfigError("sweep config needs algorithm and sizes");
    sc.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    sc.sizes = doc.at("sizes").get<std::vector<int>>();
    if (doc.contains("kappa")) sc.kappa = doc.at("kappa").get<double>();
    if (doc.contains("target_gap")) sc.target_gap = doc.at("target_gap").get<double>();
    if (doc.contains("d")) sc.options.d = doc.at("d").get<int>();
    if (doc.contains("seed")) sc.options.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("budget_factor")) sc.options.budget_factor = doc.at("budget_factor").get<double>();
    if (doc.contains("mode")) sc.options.mode = parse_draw_mode(doc.at("mode").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad sweep config value: ") + e.what());
  }
  if (sc.sizes.empty()) throw ConfigError("sweep sizes must be non-empty");
  if (!std::is_sorted(sc.sizes.begin(), sc.sizes.end()) ||
      std::adjacent_find(sc.sizes.begin(), sc.sizes.end()) != sc.sizes.end())
    throw ConfigError("sweep sizes must be strictly increasing");
  return sc;
}

std::string version_string() {
  char buf[64];
  std::snprintf(buf, sizeof buf, "ogt %s rng-fingerprint %016llx", OGT_VERSION,
                static_cast<unsigned long long>(rng_fingerprint()));
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralized gradient-tracking simulator (GT, Acc-GT, SS-GT, OGT)", "ogt"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  Args a;

  auto* run = app.add_subcommand("run", "Run one configuration; CSV to --csv (stdout by default)");
  run->add_option("config", a.config_path, "Run config JSON")->required();
  run->add_option("--csv", a.csv_out, "CSV output path, - for stdout");
  run->add_option("--summary", a.summary_out, "Write a JSON run summary to this path");

  auto* spectral = app.add_subcommand("spectral", "Print delta, theta, eta_w, rho_w, delta_tilde of a gossip matrix");
  auto* o_ring = spectral->add_option("--ring", a.ring, "Ring of N agents");
  auto* o_met = spectral->add_option("--metropolis", a.metropolis, "Lazy Metropolis on an N-cycle plus chords");
  spectral->add_option("--chords", a.chords, "Random chords for --metropolis")->needs(o_met);
  spectral->add_option("--seed", a.graph_seed, "Chord sampling seed")->needs(o_met);
  auto* o_file = spectral->add_option("--file", a.gossip_file, "Gossip matrix text file");
  spectral->add_flag("--psd", a.psd, "Apply (I + W)/2 when W is not PSD");
  o_ring->excludes(o_met)->excludes(o_file);
  o_met->excludes(o_file);

  auto* lca = app.add_subcommand("verify-lca", "Check the loopless Chebyshev bound T_k(x)^2 / eta^k <= 7");
  lca->add_option("--delta", a.delta, "Spectral gap in (0, 1]")->required();
  lca->add_option("--kmax", a.kmax, "Largest k checked")->check(CLI::NonNegativeNumber);
  lca->add_option("--grid", a.grid, "Grid points on [-1, 1]")->check(CLI::Range(2, 100000000));

  auto* sweep = app.add_subcommand("sweep", "Iterations to target over ring sizes with theorem parameters");
  sweep->add_option("config", a.config_path, "Sweep config JSON")->required();

  auto* fig1 = app.add_subcommand("fig1", "Four methods on a ring and a chorded ring; one CSV per run");
  fig1->add_option("dataset", a.dataset, "Banknote CSV (full scale)");
  fig1->add_flag("--desk", a.desk, "Desk scale: synthetic logistic data, n = 50");
  fig1->add_option("--out-dir", a.out_dir, "Output directory");
  fig1->add_option("--max-iters", a.max_iters, "Iteration cap, 0 for the scale default")->check(CLI::NonNegativeNumber);
  fig1->add_option("--seed", a.seed, "Algorithm seed");

  auto* plot_cmd = app.add_subcommand("plot", "Render CSVs as a log-scale SVG");
  plot_cmd->add_option("csv", a.csvs, "Run CSVs, one curve each")->required();
  plot_cmd->add_option("--out", a.svg_out, "SVG output path");
  plot_cmd->add_option("--x", a.x_axis, "X axis")->check(CLI::IsMember({"rounds", "grads"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* target = &app;
    for (CLI::App* sub : app.get_subcommands()) target = sub;
    err << "error: " << e.what() << "\n\n" << target->help();
    return kExitUsage;
  }

  if (spectral->parsed() && o_ring->count() + o_met->count() + o_file->count() == 0) {
    err << "error: spectral needs one of --ring, --metropolis, --file\n\n" << spectral->help();
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(a, out);
    if (spectral->parsed()) return cmd_spectral(a, out);
    if (lca->parsed()) return cmd_verify_lca(a, out);
    if (sweep->parsed()) return cmd_sweep(a, out);
    if (fig1->parsed()) return cmd_fig1(a, out);
    if (plot_cmd->parsed()) return cmd_plot(a);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace ogt::cli
