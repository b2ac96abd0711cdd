#include "ogt/harness.hpp"

#include <cmath>
#include <limits>

#include "ogt/errors.hpp"
#include "ogt/rng.hpp"

namespace ogt {

namespace {

Fig1Graph infer_fig1_graph(const RunConfig& config) {
  if (config.params.graph_id) return *config.params.graph_id;
  switch (config.graph.kind) {
    case GraphSpec::Kind::ring: return Fig1Graph::cycle;
    case GraphSpec::Kind::metropolis_lazy: return Fig1Graph::denser;
    case GraphSpec::Kind::file: break;
  }
  throw ConfigError("params.fig1_preset: graph_id is required for file graphs");
}

GossipMatrix build_graph(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphSpec::Kind::ring: return build_ring(spec.n);
    case GraphSpec::Kind::metropolis_lazy:
      if (spec.n < 3 && spec.chords > 0) throw ConfigError("graph.metropolis_lazy: chords need n >= 3");
      return build_metropolis_lazy(spec.n, add_random_chords(spec.n, ring_edges(spec.n), spec.chords, spec.seed));
    case GraphSpec::Kind::file: return load_gossip_file(spec.path);
  }
  throw ConfigError("unknown graph kind");
}

ObjectiveSuite build_objective(const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveSpec::Kind::banknote: return load_banknote(spec.path, spec.n, spec.seed, spec.mu);
    case ObjectiveSpec::Kind::synth_quadratic: return synth_quadratic(spec.n, spec.d, spec.kappa, spec.seed);
    case ObjectiveSpec::Kind::synth_logistic: return synth_logistic(spec.n, spec.d, spec.mu, spec.seed);
  }
  throw ConfigError("unknown objective kind");
}

// Inequality f(xbar) <= f(x*) + <dbar, xbar - x*> - mu/4 ||xbar - x*||^2 + L/n ||Pi X||^2,
// returned as slack / (1 + |f(xbar)|).
double inexact_gradient_slack(const Matrix& x, const Problem& pb) {
  GradientCounter scratch;
  const Point xa = row_mean(x);
  const Point da = row_mean(pb.suite.grad_all(x, scratch));
  const Point diff = xa - pb.x_star;
  const double lhs = pb.suite.loss(xa);
  const double rhs = pb.f_star + da.dot(diff) - pb.smooth.mu / 4.0 * diff.squaredNorm() +
                     pb.smooth.L / pb.suite.n() * consensus_error(x);
  return (rhs - lhs) / (1.0 + std::abs(lhs));
}

void guard_finite(long k, std::initializer_list<const Matrix*> mats) {
  for (const Matrix* m : mats)
    if (!m->allFinite()) throw DivergenceError(k, "non-finite entry in an iterate");
}

void note(long k, const char* check, double residual, double& worst) {
  worst = std::max(worst, residual);
  if (!(residual <= kDiagnosticThreshold)) throw DiagnosticError(k, check, residual);
}

struct Driver {
  const RunConfig& config;
  const Problem& pb;
  RunResult& result;
  GradientCounter counter;
  long record_every = 1;

  double loss_gap(const Matrix& x) const { return pb.suite.mean_global_loss(x) - pb.f_star; }

  void record(long k, const Matrix& x, const Matrix& q, double gap, std::optional<double> tracking) {
    IterationRecord r;
    r.k = k;
    r.vectors_sent = k * vectors_per_round(config.algorithm);
    r.grad_evals = counter.total_evals;
    r.loss_gap = gap;
    r.consensus_x = consensus_error(x);
    r.consensus_q = consensus_error(q);
    r.tracking_residual = tracking;
    result.records.push_back(r);
  }

  // Shared loop; `step` advances the state by one iteration and runs the
  // diagnostics for that step when asked to.
  template <typename State, typename Step, typename QOf>
  void loop(State state, Step step, QOf q_of) {
    const auto& stop = config.stopping;
    double gap = loss_gap(state.x);
    record(0, state.x, q_of(state), gap, std::nullopt);
    if (stop.target_loss_gap && gap <= *stop.target_loss_gap) {
      result.termination = Termination::target_reached;
      result.target_iteration = 0;
      return;
    }
    for (long k = 0; k < stop.max_iters; ++k) {
      const bool diag = config.diagnostics_every > 0 && (k + 1) % config.diagnostics_every == 0;
      std::optional<double> tracking;
      state = step(state, diag, tracking);
      const long kk = k + 1;
      result.iterations = kk;
      const bool at_record = kk % record_every == 0 || kk == stop.max_iters;
      if (stop.target_loss_gap || at_record) gap = loss_gap(state.x);
      if (!std::isfinite(gap)) throw DivergenceError(kk, "loss gap is not finite");
      if (stop.target_loss_gap && gap <= *stop.target_loss_gap) {
        record(kk, state.x, q_of(state), gap, tracking);
        result.termination = Termination::target_reached;
        result.target_iteration = kk;
        return;
      }
      if (at_record) record(kk, state.x, q_of(state), gap, tracking);
    }
    result.termination = Termination::max_iters;
  }
};

}  // namespace

std::string to_string(Termination t) { return t == Termination::target_reached ? "target_reached" : "max_iters"; }

EdgeSet add_random_chords(int n, EdgeSet base, int count, std::uint64_t seed) {
  const long possible = static_cast<long>(n) * (n - 1) / 2;
  if (count < 0) throw ConfigError("chord count must be >= 0");
  if (static_cast<long>(base.size()) + count > possible)
    throw ConfigError("cannot add " + std::to_string(count) + " chords to a graph on " + std::to_string(n) +
                      " vertices");
  Xoshiro256 gen(seed);
  int added = 0;
  while (added < count) {
    const int i = static_cast<int>(gen.uniform() * n);
    const int j = static_cast<int>(gen.uniform() * n);
    if (i == j) continue;
    if (base.insert(make_edge(i, j)).second) ++added;
  }
  return base;
}

Problem build_problem(const RunConfig& config) {
  Problem pb{build_graph(config.graph), {}, build_objective(config.objective), {}, {}, 0.0, 0.0};
  if (pb.w.n() != pb.suite.n())
    throw ConfigError("graph has " + std::to_string(pb.w.n()) + " agents but the objective has " +
                      std::to_string(pb.suite.n()));
  if (config.algorithm == Algorithm::ogt && !pb.w.psd) pb.w = make_psd(pb.w);
  pb.spectral = spectral_constants(spectral_gap(pb.w));
  pb.smooth = smoothness_constants(pb.suite);
  const Minimizer m = reference_minimizer(pb.suite);
  pb.x_star = m.x;
  pb.f_star = pb.suite.loss(m.x);
  pb.x_star_residual = m.grad_norm;
  return pb;
}

ResolvedParams resolve_params(const RunConfig& config, const Problem& pb) {
  ResolvedParams rp;
  const double kappa = pb.smooth.kappa();
  const auto source = config.params.source;
  switch (config.algorithm) {
    case Algorithm::gt:
      rp.gt.eta = source == ParamsSpec::Source::explicit_values ? config.params.values.eta
                                                                : pb.spectral.delta / (4.0 * pb.smooth.L);
      if (!(rp.gt.eta > 0.0)) throw ConfigError("gt: eta must be positive");
      break;
    case Algorithm::accgt:
      if (source == ParamsSpec::Source::explicit_values) {
        rp.accgt.alpha = config.params.values.alpha;
        rp.accgt.beta = config.params.values.beta;
      } else {
        rp.accgt = preset_fig1(infer_fig1_graph(config), pb.smooth.mu).accgt;
      }
      if (!(rp.accgt.alpha > 0.0) || !(rp.accgt.beta > 0.0 && rp.accgt.beta <= 1.0))
        throw ConfigError("accgt: need alpha > 0 and beta in (0, 1]");
      break;
    case Algorithm::ssgt:
      if (source == ParamsSpec::Source::explicit_values) {
        rp.snapshot = config.params.values;
        if (!config.params.has_gamma) rp.snapshot.gamma = coupling_gamma(rp.snapshot.alpha, rp.snapshot.tau);
      } else {
        rp.snapshot = derive_ssgt_params(kappa, pb.spectral.delta, pb.smooth.L, pb.smooth.mu);
      }
      validate(rp.snapshot);
      break;
    case Algorithm::ogt:
      if (source == ParamsSpec::Source::explicit_values) {
        rp.snapshot = config.params.values;
        if (!config.params.has_gamma) rp.snapshot.gamma = coupling_gamma(rp.snapshot.alpha, rp.snapshot.tau);
        if (rp.snapshot.eta_w <= 0.0) rp.snapshot.eta_w = pb.spectral.eta_w;
      } else if (source == ParamsSpec::Source::fig1_preset) {
        rp.snapshot = preset_fig1(infer_fig1_graph(config), pb.smooth.mu).ogt;
        rp.snapshot.eta_w = pb.spectral.eta_w;
      } else {
        rp.snapshot = derive_ogt_params(kappa, pb.spectral, pb.smooth.L, pb.smooth.mu);
      }
      validate(rp.snapshot, true);
      break;
  }
  return rp;
}

RunResult run(const RunConfig& config) { return run(config, build_problem(config)); }

RunResult run(const RunConfig& config, const Problem& pb) {
  if (config.stopping.max_iters < 0) throw ConfigError("stopping.max_iters must be >= 0");
  if (config.diagnostics_every < 0) throw ConfigError("diagnostics_every must be >= 0");
  if (config.record_every < 0) throw ConfigError("record_every must be >= 0");
  RunResult result;
  result.config = config;
  result.config_json = to_json(config);
  result.params = resolve_params(config, pb);
  result.delta = pb.spectral.delta;
  result.delta_tilde = pb.spectral.delta_tilde;
  result.L = pb.smooth.L;
  result.mu = pb.smooth.mu;
  result.f_star = pb.f_star;
  result.x_star_residual = pb.x_star_residual;
  result.diagnostics.inexact_gradient_slack = std::numeric_limits<double>::infinity();

  Driver drv{config, pb, result, {}, 1};
  drv.record_every = config.record_every > 0 ? config.record_every
                                             : std::max(1L, config.stopping.max_iters / 2000);
  const Matrix x0 = Matrix::Zero(pb.suite.n(), pb.suite.d());
  const ResolvedParams& rp = result.params;
  DiagnosticSummary& ds = result.diagnostics;
  const ObjectiveSuite& suite = pb.suite;

  switch (config.algorithm) {
    case Algorithm::gt: {
      auto step = [&](const GtState& s, bool diag, std::optional<double>& tracking) {
        GtState next = step_gt(s, pb.w, rp.gt, suite, drv.counter);
        ++result.gradient_iterations;
        guard_finite(next.k, {&next.x, &next.s});
        if (diag) {
          ++ds.checks;
          tracking = tracking_residual(next, suite);
          note(next.k, "tracking", *tracking, ds.tracking);
          ds.inexact_gradient_slack = std::min(ds.inexact_gradient_slack, inexact_gradient_slack(next.x, pb));
        }
        return next;
      };
      drv.loop(init_gt(x0, suite, drv.counter), step, [](const GtState& s) -> const Matrix& { return s.x; });
      break;
    }
    case Algorithm::accgt: {
      auto step = [&](const AccGtState& s, bool diag, std::optional<double>& tracking) {
        AccGtState next = step_accgt(s, pb.w, rp.accgt, pb.smooth.mu, suite, drv.counter);
        ++result.gradient_iterations;
        guard_finite(next.k, {&next.x, &next.y, &next.z, &next.s});
        if (diag) {
          ++ds.checks;
          tracking = tracking_residual(next, suite);
          note(next.k, "tracking", *tracking, ds.tracking);
          ds.inexact_gradient_slack = std::min(ds.inexact_gradient_slack, inexact_gradient_slack(next.x, pb));
        }
        return next;
      };
      drv.loop(init_accgt(x0, suite, drv.counter), step, [](const AccGtState& s) -> const Matrix& { return s.x; });
      break;
    }
    case Algorithm::ssgt: {
      CoupledBernoulliStream stream(config.seed, rp.snapshot.p, rp.snapshot.q, config.mode);
      auto step = [&](const SsgtState& s, bool diag, std::optional<double>& tracking) {
        const Draw draw = stream.next();
        if (draw.needs_gradient()) ++result.gradient_iterations;
        SsgtState next = step_ssgt(s, pb.w, rp.snapshot, draw, suite, drv.counter);
        guard_finite(next.k, {&next.x, &next.y, &next.z, &next.u, &next.g, &next.m});
        if (diag) {
          ++ds.checks;
          note(next.k, "average_dynamics", check_average_dynamics(s, next, draw, rp.snapshot, suite),
               ds.average_dynamics);
          tracking = tracking_residual(next, suite);
          note(next.k, "tracking", *tracking, ds.tracking);
          note(next.k, "snapshot_average", snapshot_average_residual(next), ds.snapshot_average);
          note(next.k, "cache", cache_residual(next, suite), ds.cache);
          ds.inexact_gradient_slack = std::min(ds.inexact_gradient_slack, inexact_gradient_slack(next.x, pb));
        }
        return next;
      };
      drv.loop(init_ssgt(x0, suite, drv.counter), step, [](const SsgtState& s) -> const Matrix& { return s.q; });
      break;
    }
    case Algorithm::ogt: {
      CoupledBernoulliStream stream(config.seed, rp.snapshot.p, rp.snapshot.q, config.mode);
      auto step = [&](const OgtState& s, bool diag, std::optional<double>& tracking) {
        const Draw draw = stream.next();
        if (draw.needs_gradient()) ++result.gradient_iterations;
        OgtState next = step_ogt(s, pb.w, rp.snapshot, draw, suite, drv.counter);
        guard_finite(next.k, {&next.x, &next.y, &next.zt, &next.ut, &next.gt, &next.m});
        if (diag) {
          ++ds.checks;
          note(next.k, "average_dynamics", check_average_dynamics(s, next, draw, rp.snapshot, suite),
               ds.average_dynamics);
          tracking = tracking_residual(next, suite);
          note(next.k, "tracking", *tracking, ds.tracking);
          note(next.k, "snapshot_average", snapshot_average_residual(next), ds.snapshot_average);
          note(next.k, "block_average", block_average_residual(next), ds.block_average);
          note(next.k, "cache", cache_residual(next, suite), ds.cache);
          ds.inexact_gradient_slack = std::min(ds.inexact_gradient_slack, inexact_gradient_slack(next.x, pb));
        }
        return next;
      };
      drv.loop(init_ogt(x0, suite, drv.counter), step, [](const OgtState& s) -> const Matrix& { return s.q; });
      break;
    }
  }
  result.grad_evals_total = drv.counter.total_evals;
  return result;
}

std::vector<SweepRow> sweep_scaling(Algorithm algorithm, const std::vector<int>& sizes, double kappa,
                                    double target_gap, const SweepOptions& options) {
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw ConfigError("sweep sizes must be increasing");
  std::vector<SweepRow> rows;
  for (const int n : sizes) {
    RunConfig c;
    c.algorithm = algorithm;
    c.graph.kind = GraphSpec::Kind::ring;
    c.graph.n = n;
    c.objective.kind = ObjectiveSpec::Kind::synth_quadratic;
    c.objective.n = n;
    c.objective.d = options.d;
    c.objective.kappa = kappa;
    c.objective.seed = options.seed;
    c.params.source = ParamsSpec::Source::theorem;
    c.seed = options.seed;
    c.mode = options.mode;
    c.stopping.target_loss_gap = target_gap;

    const Problem pb = build_problem(c);
    SweepRow row;
    row.n = n;
    row.delta = pb.spectral.delta;
    row.delta_tilde = pb.spectral.delta_tilde;
    const double gap = algorithm == Algorithm::ogt ? row.delta_tilde : row.delta;
    row.budget = static_cast<long>(std::ceil(options.budget_factor * std::sqrt(pb.smooth.kappa()) / gap));
    c.stopping.max_iters = row.budget;
    const RunResult r = run(c, pb);
    row.iters_to_target = r.target_iteration;
    rows.push_back(row);
  }
  return rows;
}

std::optional<double> fitted_exponent(const std::vector<SweepRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : rows) {
    if (!r.iters_to_target || *r.iters_to_target <= 0) continue;
    const double lx = std::log(static_cast<double>(r.n));
    const double ly = std::log(static_cast<double>(*r.iters_to_target));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::nullopt;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

RunConfig fig1_config(const std::string& dataset_path, Fig1Scale scale, Fig1Graph graph, Algorithm algorithm,
                      const Fig1Options& options) {
  const bool paper = scale == Fig1Scale::paper;
  const int n = paper ? 200 : 50;
  RunConfig c;
  c.algorithm = algorithm;
  if (graph == Fig1Graph::cycle) {
    c.graph.kind = GraphSpec::Kind::ring;
    c.graph.n = n;
  } else {
    c.graph.kind = GraphSpec::Kind::metropolis_lazy;
    c.graph.n = n;
    c.graph.chords = paper ? 50 : 12;
    c.graph.seed = options.graph_seed;
  }
  if (paper) {
    c.objective.kind = ObjectiveSpec::Kind::banknote;
    c.objective.path = dataset_path;
  } else {
    c.objective.kind = ObjectiveSpec::Kind::synth_logistic;
  }
  c.objective.n = n;
  c.objective.d = 4;
  c.objective.mu = 0.01;
  c.objective.seed = options.data_seed;
  // SS-GT has no hand-tuned preset; it runs with the theorem values.
  c.params.source = algorithm == Algorithm::ssgt ? ParamsSpec::Source::theorem : ParamsSpec::Source::fig1_preset;
  if (algorithm != Algorithm::ssgt) c.params.graph_id = graph;
  c.seed = options.seed;
  c.mode = DrawMode::coupled;
  c.stopping.max_iters = options.max_iters > 0 ? options.max_iters : (paper ? 200000 : 100000);
  c.stopping.target_loss_gap = options.target_loss_gap.value_or(paper ? 1e-15 : 1e-10);
  return c;
}

Fig1Results reproduce_fig1(const std::string& dataset_path, Fig1Scale scale, const Fig1Options& options) {
  Fig1Results out;
  for (const Fig1Graph g : {Fig1Graph::cycle, Fig1Graph::denser}) {
    for (const Algorithm a : {Algorithm::gt, Algorithm::accgt, Algorithm::ssgt, Algorithm::ogt}) {
      out.emplace(to_string(g) + "_" + to_string(a), run(fig1_config(dataset_path, scale, g, a, options)));
    }
  }
  return out;
}

}  // namespace ogt
