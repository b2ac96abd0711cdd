#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ogt/algorithms.hpp"
#include "ogt/config.hpp"
#include "ogt/graph.hpp"
#include "ogt/objective.hpp"

namespace ogt {

/// Residual threshold above which a diagnostic aborts a run.
inline constexpr double kDiagnosticThreshold = 1e-8;

struct IterationRecord {
  long k = 0;                 ///< iteration = communication round
  long vectors_sent = 0;      ///< cumulative vectors per agent
  long grad_evals = 0;        ///< cumulative single-agent gradient evaluations
  double loss_gap = 0.0;      ///< (1/n) sum_i f(x_i^k) - f(x*)
  double consensus_x = 0.0;
  double consensus_q = 0.0;   ///< snapshot Q for SS-GT/OGT; X for GT/Acc-GT
  std::optional<double> tracking_residual;
};

enum class Termination { target_reached, max_iters };

std::string to_string(Termination t);

/// Largest residual seen per diagnostic over a run.
struct DiagnosticSummary {
  long checks = 0;
  double average_dynamics = 0.0;
  double tracking = 0.0;
  double snapshot_average = 0.0;
  double block_average = 0.0;
  double cache = 0.0;
  /// Smallest relative slack of f(xbar) <= f(x*) + <dbar, xbar - x*> - mu/4 ||xbar - x*||^2
  /// + L/n ||Pi X||^2 (negative means violated).
  double inexact_gradient_slack = 0.0;
};

/// Graph, objective and reference solution built from a RunConfig.
struct Problem {
  GossipMatrix w;
  SpectralConstants spectral;
  ObjectiveSuite suite;
  Smoothness smooth;
  Point x_star;
  double f_star = 0.0;
  double x_star_residual = 0.0;
};

/// Parameters actually used by a run.
struct ResolvedParams {
  HyperParams snapshot;  ///< SS-GT / OGT
  GtParams gt;
  AccGtParams accgt;
};

/// Builds the problem. OGT gets (I + W)/2 when W is not flagged PSD.
Problem build_problem(const RunConfig& config);

ResolvedParams resolve_params(const RunConfig& config, const Problem& problem);

struct RunResult {
  RunConfig config;
  std::string config_json;
  ResolvedParams params;
  double delta = 0.0;
  double delta_tilde = 0.0;
  double L = 0.0;
  double mu = 0.0;
  double f_star = 0.0;
  double x_star_residual = 0.0;
  std::vector<IterationRecord> records;
  Termination termination = Termination::max_iters;
  long iterations = 0;
  std::optional<long> target_iteration;
  long grad_evals_total = 0;        ///< equals the run's GradientCounter
  long gradient_iterations = 0;     ///< iterations that evaluated any gradient
  DiagnosticSummary diagnostics;
};

/// Runs one configuration to its stopping criterion. X^0 = 0.
///
/// Throws NonConvergenceError if the reference solver fails, DiagnosticError
/// if a diagnostic residual exceeds kDiagnosticThreshold, DivergenceError on
/// the first non-finite iterate.
RunResult run(const RunConfig& config);

/// Same on an already built problem (lets sweeps reuse spectral work).
RunResult run(const RunConfig& config, const Problem& problem);

/// Adds `count` distinct random chords to `base`, rejecting self loops and
/// edges already present. Deterministic in `seed`.
EdgeSet add_random_chords(int n, EdgeSet base, int count, std::uint64_t seed);

struct SweepRow {
  int n = 0;
  double delta = 0.0;
  double delta_tilde = 0.0;
  long budget = 0;
  std::optional<long> iters_to_target;
};

struct SweepOptions {
  int d = 4;
  std::uint64_t seed = 1;
  /// Iteration cap per size: budget_factor * sqrt(kappa) / delta for SS-GT
  /// and GT-type methods, budget_factor * sqrt(kappa) / delta_tilde for OGT.
  double budget_factor = 100.0;
  DrawMode mode = DrawMode::coupled;
};

/// Ring graphs of the given sizes with synthetic quadratics of condition
/// number kappa and theorem-derived parameters.
std::vector<SweepRow> sweep_scaling(Algorithm algorithm, const std::vector<int>& sizes, double kappa,
                                    double target_gap, const SweepOptions& options = {});

/// Least-squares slope of log(iters) against log(n) over rows that reached
/// the target; nullopt if fewer than two did.
std::optional<double> fitted_exponent(const std::vector<SweepRow>& rows);

enum class Fig1Scale { paper, desk };

struct Fig1Options {
  std::uint64_t seed = 1;      ///< algorithm randomness
  std::uint64_t data_seed = 2; ///< sampling of data / synthetic features
  std::uint64_t graph_seed = 3;
  long max_iters = 0;          ///< 0 picks the scale default
  std::optional<double> target_loss_gap;  ///< default 1e-10 (desk) or 1e-15 (full scale)
};

/// Keyed by "<graph>_<algorithm>", e.g. "cycle_ogt".
using Fig1Results = std::map<std::string, RunResult>;

/// The four-method comparison on a ring and a chorded ring with lazy
/// Metropolis weights. Full scale (Fig1Scale::paper): banknote data, n = 200, 50 chords.
/// Desk scale: synthetic logistic data, n = 50, 12 chords.
Fig1Results reproduce_fig1(const std::string& dataset_path, Fig1Scale scale, const Fig1Options& options = {});

/// Config used by reproduce_fig1 for one (graph, algorithm) pair.
RunConfig fig1_config(const std::string& dataset_path, Fig1Scale scale, Fig1Graph graph, Algorithm algorithm,
                      const Fig1Options& options = {});

}  // namespace ogt
