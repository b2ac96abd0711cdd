#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ogt/algorithms.hpp"

namespace ogt {

struct GraphSpec {
  enum class Kind { ring, metropolis_lazy, file };
  Kind kind = Kind::ring;
  int n = 0;              ///< ring, metropolis_lazy
  int chords = 0;         ///< metropolis_lazy: random chords added to the n-cycle
  std::uint64_t seed = 0; ///< metropolis_lazy: chord sampling seed
  std::string path;       ///< file
};

struct ObjectiveSpec {
  enum class Kind { banknote, synth_quadratic, synth_logistic };
  Kind kind = Kind::synth_quadratic;
  std::string path;       ///< banknote
  int n = 0;
  int d = 4;              ///< synth_* only; banknote is always 4
  double mu = 0.01;       ///< banknote, synth_logistic
  double kappa = 10.0;    ///< synth_quadratic
  std::uint64_t seed = 0;
};

struct ParamsSpec {
  enum class Source { theorem, fig1_preset, explicit_values };
  Source source = Source::theorem;
  std::optional<Fig1Graph> graph_id;  ///< fig1_preset; inferred from the graph kind when absent
  /// explicit_values. SS-GT/OGT read the full set (gamma defaults to
  /// 4 alpha/(4 - 4 tau - 3 alpha), eta_w to the graph's value when <= 0).
  /// GT reads eta; Acc-GT reads alpha (stepsize) and beta (momentum).
  HyperParams values;
  bool has_gamma = false;
};

struct StoppingSpec {
  long max_iters = 10000;
  std::optional<double> target_loss_gap;
};

/// Everything `run` needs. Serialized as JSON with the keys below, one nested
/// object selecting the variant for graph, objective and params:
///
///   { "algorithm": "ogt",
///     "graph": {"ring": {"n": 50}},
///     "objective": {"synth_logistic": {"n": 50, "d": 4, "mu": 0.01, "seed": 1}},
///     "params": {"fig1_preset": {"graph_id": "cycle"}},
///     "seed": 42, "mode": "coupled",
///     "stopping": {"max_iters": 100000, "target_loss_gap": 1e-10},
///     "diagnostics_every": 0, "record_every": 0 }
struct RunConfig {
  Algorithm algorithm = Algorithm::ogt;
  GraphSpec graph;
  ObjectiveSpec objective;
  ParamsSpec params;
  std::uint64_t seed = 1;
  DrawMode mode = DrawMode::coupled;
  StoppingSpec stopping;
  long diagnostics_every = 0;  ///< 0 disables per-iteration invariant checks
  long record_every = 0;       ///< 0 means max(1, max_iters / 2000)
};

/// Throws ConfigError on unknown keys, missing fields, or more than one
/// variant selected for graph / objective / params.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Canonical JSON (sorted keys, fixed formatting) for echoing in outputs.
std::string to_json(const RunConfig& config);

/// Applies OGT_SEED from the environment, if set, to config.seed.
void apply_env_overrides(RunConfig& config);

}  // namespace ogt
