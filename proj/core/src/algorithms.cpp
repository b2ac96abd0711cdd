#include "ogt/algorithms.hpp"

#include <cmath>

#include "ogt/errors.hpp"

namespace ogt {

namespace {

void check_dims(const GossipMatrix& w, const Matrix& x, const char* where) {
  if (x.rows() != w.n())
    throw ShapeError(std::string(where) + ": state has " + std::to_string(x.rows()) + " rows but W is " +
                     std::to_string(w.n()) + "x" + std::to_string(w.n()));
}

Matrix mix(const GossipMatrix& w, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  out.noalias() = w.weights * a;
  return out;
}

}  // namespace

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::gt: return "gt";
    case Algorithm::accgt: return "accgt";
    case Algorithm::ssgt: return "ssgt";
    case Algorithm::ogt: return "ogt";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "gt") return Algorithm::gt;
  if (text == "accgt") return Algorithm::accgt;
  if (text == "ssgt") return Algorithm::ssgt;
  if (text == "ogt") return Algorithm::ogt;
  throw ConfigError("unknown algorithm '" + text + "' (expected gt, accgt, ssgt or ogt)");
}

int vectors_per_round(Algorithm algo) {
  // SS-GT mixes Z, U and G; the U and G exchanges only carry new information
  // on xi-branches but are charged every round for comparability.
  return algo == Algorithm::gt ? 2 : 3;
}

void validate(const HyperParams& hp, bool needs_eta_w) {
  auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_open_unit(hp.alpha)) throw ConfigError("alpha must lie in (0, 1)");
  if (!in_open_unit(hp.gamma)) throw ConfigError("gamma must lie in (0, 1)");
  if (!in_open_unit(hp.tau)) throw ConfigError("tau must lie in (0, 1)");
  if (!(hp.alpha + hp.tau < 1.0)) throw ConfigError("alpha + tau must be < 1");
  if (!(hp.eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(hp.beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (!(hp.p > 0.0 && hp.p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  if (!(hp.q > 0.0 && hp.q <= 1.0)) throw ConfigError("q must lie in (0, 1]");
  if (needs_eta_w && !in_open_unit(hp.eta_w)) throw ConfigError("eta_w must lie in (0, 1)");
}

double coupling_gamma(double alpha, double tau) { return 4.0 * alpha / (4.0 - 4.0 * tau - 3.0 * alpha); }

HyperParams derive_ssgt_params(double kappa, double delta, double L, double mu) {
  if (!(kappa >= 1.0)) throw DomainError("derive_ssgt_params: kappa must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("derive_ssgt_params: delta must lie in (0, 1]");
  HyperParams hp;
  hp.tau = 0.5;
  hp.alpha = 1.0 / (23.0 * std::sqrt(kappa));
  hp.gamma = coupling_gamma(hp.alpha, hp.tau);
  hp.p = hp.q = delta / 4232.0;
  hp.eta = delta * std::sqrt(kappa) / (12167.0 * L);
  hp.beta = mu * hp.eta / 2.0;
  return hp;
}

HyperParams derive_ogt_params(double kappa, const SpectralConstants& spectral, double L, double mu) {
  if (!(kappa >= 1.0)) throw DomainError("derive_ogt_params: kappa must be >= 1");
  const double dt = spectral.delta_tilde;
  if (!(dt > 0.0 && dt < 1.0)) throw DomainError("derive_ogt_params: delta_tilde must lie in (0, 1)");
  HyperParams hp;
  hp.tau = 0.5;
  hp.p = hp.q = dt / 60750.0;
  hp.alpha = 1.0 / (45.0 * std::sqrt(kappa));
  hp.gamma = coupling_gamma(hp.alpha, hp.tau);
  hp.eta = dt * std::sqrt(kappa) / (91125.0 * L);
  hp.beta = mu * hp.eta / 2.0;
  hp.eta_w = spectral.eta_w;
  return hp;
}

std::string to_string(Fig1Graph g) { return g == Fig1Graph::cycle ? "cycle" : "denser"; }

Fig1Graph parse_fig1_graph(const std::string& text) {
  if (text == "cycle") return Fig1Graph::cycle;
  if (text == "denser") return Fig1Graph::denser;
  throw ConfigError("unknown fig1 graph '" + text + "' (expected cycle or denser)");
}

Fig1Preset preset_fig1(Fig1Graph graph, double mu) {
  Fig1Preset preset;
  HyperParams& hp = preset.ogt;
  hp.alpha = 0.02;
  hp.tau = 0.1;
  hp.gamma = coupling_gamma(hp.alpha, hp.tau);
  if (graph == Fig1Graph::cycle) {
    hp.eta = 0.05;
    hp.p = hp.q = 0.1;
    preset.accgt.alpha = 0.0001;
  } else {
    hp.eta = 0.1;
    hp.p = hp.q = 0.2;
    preset.accgt.alpha = 0.0004;
  }
  hp.beta = hp.eta * mu / 2.0;
  preset.accgt.beta = std::sqrt(mu * preset.accgt.alpha) / 2.0;
  return preset;
}

// Initialization --------------------------------------------------------------

GtState init_gt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter) {
  GtState s;
  s.x = x0;
  s.grad_x = suite.grad_all(x0, counter);
  s.s = s.grad_x;
  return s;
}

AccGtState init_accgt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter) {
  AccGtState s;
  s.x = s.y = s.z = x0;
  s.grad_x = suite.grad_all(x0, counter);
  s.s = s.grad_x;
  return s;
}

SsgtState init_ssgt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter) {
  SsgtState s;
  s.x = s.y = s.z = s.u = s.q = x0;
  s.m = suite.grad_all(x0, counter);
  s.g = s.m;
  return s;
}

OgtState init_ogt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter) {
  OgtState s;
  s.x = s.y = s.q = x0;
  s.zt = s.ut = ca_stack(x0);
  s.m = suite.grad_all(x0, counter);
  s.gt = ca_stack(s.m);
  return s;
}

// Steps ----------------------------------------------------------------------

GtState step_gt(const GtState& state, const GossipMatrix& w, const GtParams& params, const ObjectiveSuite& suite,
                GradientCounter& counter) {
  check_dims(w, state.x, "step_gt");
  GtState next;
  next.x = mix(w, state.x) - params.eta * state.s;
  next.grad_x = suite.grad_all(next.x, counter);
  next.s = mix(w, state.s) + next.grad_x - state.grad_x;
  next.k = state.k + 1;
  return next;
}

AccGtState step_accgt(const AccGtState& state, const GossipMatrix& w, const AccGtParams& params, double mu,
                      const ObjectiveSuite& suite, GradientCounter& counter) {
  check_dims(w, state.x, "step_accgt");
  const double c = mu * params.alpha / params.beta;
  AccGtState next;
  next.z = (mix(w, c * state.x + state.z) - (params.alpha / params.beta) * state.s) / (1.0 + c);
  next.y = params.beta * next.z + (1.0 - params.beta) * mix(w, state.y);
  next.x = params.beta * next.z + (1.0 - params.beta) * next.y;
  next.grad_x = suite.grad_all(next.x, counter);
  next.s = mix(w, state.s) + next.grad_x - state.grad_x;
  next.k = state.k + 1;
  return next;
}

SsgtState step_ssgt(const SsgtState& state, const GossipMatrix& w, const HyperParams& hp, const Draw& draw,
                    const ObjectiveSuite& suite, GradientCounter& counter) {
  check_dims(w, state.x, "step_ssgt");
  const Matrix& x = state.x;
  Matrix grad_x;
  if (draw.needs_gradient()) grad_x = suite.grad_all(x, counter);

  SsgtState next;
  Matrix inner = state.z + hp.beta * x - hp.eta * state.g;
  if (draw.zeta != 0.0) inner += (hp.eta * draw.zeta) * (state.m - grad_x);
  next.z = mix(w, inner) / (1.0 + hp.beta);
  next.y = x + hp.gamma * (next.z - state.z);

  if (draw.xi == 0) {
    next.q = state.q;
    next.m = state.m;
    next.u = mix(w, state.u);
    next.g = mix(w, state.g);
  } else {
    next.q = x;
    next.m = std::move(grad_x);
    next.u = mix(w, x);
    next.g = mix(w, state.g) + next.m - state.m;
  }
  next.x = (1.0 - hp.alpha - hp.tau) * next.y + hp.alpha * next.z + hp.tau * next.u;
  next.k = state.k + 1;
  return next;
}

SsgtState step_ssgt(const SsgtState& state, const GossipMatrix& w, const HyperParams& params,
                    CoupledBernoulliStream& stream, const ObjectiveSuite& suite, GradientCounter& counter) {
  return step_ssgt(state, w, params, stream.next(), suite, counter);
}

OgtState step_ogt(const OgtState& state, const GossipMatrix& w, const HyperParams& hp, const Draw& draw,
                  const ObjectiveSuite& suite, GradientCounter& counter) {
  check_dims(w, state.x, "step_ogt");
  const Eigen::Index n = state.x.rows();
  const Matrix& x = state.x;
  Matrix grad_x;
  if (draw.needs_gradient()) grad_x = suite.grad_all(x, counter);

  // Mixing input: Zt + beta X_ca - eta G_ca [+ eta zeta (M - grad F(X))_ca],
  // where G is the top block of Gt.
  Matrix top_in = state.zt.topRows(n) + hp.beta * x - hp.eta * state.gt.topRows(n);
  Matrix bottom_in = state.zt.bottomRows(n) + hp.beta * x - hp.eta * state.gt.topRows(n);
  if (draw.zeta != 0.0) {
    const Matrix corr = (hp.eta * draw.zeta) * (state.m - grad_x);
    top_in += corr;
    bottom_in += corr;
  }
  Matrix inner(2 * n, x.cols());
  inner.topRows(n) = top_in;
  inner.bottomRows(n) = bottom_in;

  OgtState next;
  next.zt = apply_augmented(w, hp.eta_w, inner) / (1.0 + hp.beta);
  next.y = x + hp.gamma * (next.zt.topRows(n) - state.zt.topRows(n));

  if (draw.xi == 0) {
    next.q = state.q;
    next.m = state.m;
    next.ut = apply_augmented(w, hp.eta_w, state.ut);
    next.gt = apply_augmented(w, hp.eta_w, state.gt);
  } else {
    next.q = x;
    next.m = std::move(grad_x);
    next.ut = apply_augmented(w, hp.eta_w, ca_stack(x));
    next.gt = apply_augmented(w, hp.eta_w, state.gt);
    const Matrix delta_m = next.m - state.m;
    next.gt.topRows(n) += delta_m;
    next.gt.bottomRows(n) += delta_m;
  }
  next.x = (1.0 - hp.alpha - hp.tau) * next.y + hp.alpha * next.zt.topRows(n) + hp.tau * next.ut.topRows(n);
  next.k = state.k + 1;
  return next;
}

OgtState step_ogt(const OgtState& state, const GossipMatrix& w, const HyperParams& params,
                  CoupledBernoulliStream& stream, const ObjectiveSuite& suite, GradientCounter& counter) {
  return step_ogt(state, w, params, stream.next(), suite, counter);
}

}  // namespace ogt
