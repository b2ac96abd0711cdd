#pragma once

#include <string>

#include "ogt/graph.hpp"
#include "ogt/objective.hpp"
#include "ogt/rng.hpp"

namespace ogt {

enum class Algorithm { gt, accgt, ssgt, ogt };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& text);

/// Vectors of length d each agent sends per communication round.
int vectors_per_round(Algorithm algo);

/// Parameters of the snapshot-based methods (SS-GT and OGT).
///
///   alpha, tau: weights of Z and U in the coupling X = (1-alpha-tau) Y + alpha Z + tau U
///   gamma:      step of Y along the change of Z
///   eta:        stepsize of the Z update
///   beta:       strong-convexity damping of the Z update
///   p, q:       snapshot refresh and correction probabilities
///   eta_w:      momentum weight of the augmented mixing operator (OGT only)
struct HyperParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double eta = 0.0;
  double p = 1.0;
  double q = 1.0;
  double eta_w = 0.0;
};

/// Throws ConfigError unless alpha, gamma, tau in (0,1), alpha + tau < 1,
/// eta > 0, beta >= 0 and p, q in (0, 1]. `needs_eta_w` additionally
/// requires eta_w in (0, 1).
void validate(const HyperParams& params, bool needs_eta_w = false);

/// gamma = 4 alpha / (4 - 4 tau - 3 alpha).
double coupling_gamma(double alpha, double tau);

/// Theorem-backed parameters for SS-GT:
/// tau = 1/2, alpha = 1/(23 sqrt kappa), p = q = delta/4232,
/// eta = delta sqrt(kappa) / (12167 L), beta = mu eta / 2.
HyperParams derive_ssgt_params(double kappa, double delta, double L, double mu);

/// Theorem-backed parameters for OGT:
/// tau = 1/2, alpha = 1/(45 sqrt kappa), p = q = delta_tilde/60750,
/// eta = delta_tilde sqrt(kappa) / (91125 L), beta = mu eta / 2, and eta_w
/// from the spectral constants that produced delta_tilde.
HyperParams derive_ogt_params(double kappa, const SpectralConstants& spectral, double L, double mu);

struct GtParams {
  double eta = 0.0;
};

/// Acc-GT: alpha is the stepsize, beta the momentum weight.
struct AccGtParams {
  double alpha = 0.0;
  double beta = 0.0;
};

enum class Fig1Graph { cycle, denser };

std::string to_string(Fig1Graph g);
Fig1Graph parse_fig1_graph(const std::string& text);

/// Hand-tuned settings of the logistic-regression comparison. eta_w is left
/// at zero; callers fill it from the spectral constants of the actual graph.
struct Fig1Preset {
  HyperParams ogt;
  AccGtParams accgt;
};

Fig1Preset preset_fig1(Fig1Graph graph, double mu);

// States ---------------------------------------------------------------------

struct GtState {
  Matrix x;
  Matrix s;        ///< gradient tracker
  Matrix grad_x;   ///< cached grad F(X^k)
  long k = 0;
};

struct AccGtState {
  Matrix x, y, z, s;
  Matrix grad_x;   ///< cached grad F(X^k)
  long k = 0;
};

/// SS-GT iterates. `x` holds X^k = (1-alpha-tau) Y^k + alpha Z^k + tau U^k for
/// the current k; `m` caches grad F(Q^k).
struct SsgtState {
  Matrix x, y, z, u, q, m, g;
  long k = 0;
};

/// OGT iterates. zt, ut, gt are 2n x d stacks whose top blocks play the roles
/// of Z, U, G.
struct OgtState {
  Matrix x, y, q, m;
  Matrix zt, ut, gt;
  long k = 0;
};

GtState init_gt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter);
AccGtState init_accgt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter);
SsgtState init_ssgt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter);
OgtState init_ogt(const Matrix& x0, const ObjectiveSuite& suite, GradientCounter& counter);

/// X^{k+1} = W X^k - eta S^k;  S^{k+1} = W S^k + grad F(X^{k+1}) - grad F(X^k).
GtState step_gt(const GtState& state, const GossipMatrix& w, const GtParams& params, const ObjectiveSuite& suite,
                GradientCounter& counter);

/// One Acc-GT round:
///   Z+ = (W (c X + Z) - (alpha/beta) S) / (1 + c),  c = mu alpha / beta
///   Y+ = beta Z+ + (1 - beta) W Y
///   X+ = beta Z+ + (1 - beta) Y+
///   S+ = W S + grad F(X+) - grad F(X)
AccGtState step_accgt(const AccGtState& state, const GossipMatrix& w, const AccGtParams& params, double mu,
                      const ObjectiveSuite& suite, GradientCounter& counter);

/// One SS-GT round with the given draw. grad F(X^k) is evaluated at most once,
/// and only when xi = 1 or zeta != 0.
SsgtState step_ssgt(const SsgtState& state, const GossipMatrix& w, const HyperParams& params, const Draw& draw,
                    const ObjectiveSuite& suite, GradientCounter& counter);

SsgtState step_ssgt(const SsgtState& state, const GossipMatrix& w, const HyperParams& params,
                    CoupledBernoulliStream& stream, const ObjectiveSuite& suite, GradientCounter& counter);

/// One OGT round with the given draw. Mixing goes through apply_augmented;
/// gradient accounting matches step_ssgt.
OgtState step_ogt(const OgtState& state, const GossipMatrix& w, const HyperParams& params, const Draw& draw,
                  const ObjectiveSuite& suite, GradientCounter& counter);

OgtState step_ogt(const OgtState& state, const GossipMatrix& w, const HyperParams& params,
                  CoupledBernoulliStream& stream, const ObjectiveSuite& suite, GradientCounter& counter);

// Diagnostics ----------------------------------------------------------------

/// Recomputes the averaged recursion of one step from `prev` and the draw
/// (with the average gradient at X^k computed fresh) and returns the largest
/// infinity-norm residual against the averages of `next`. Gradient
/// evaluations made here are not counted.
double check_average_dynamics(const SsgtState& prev, const SsgtState& next, const Draw& draw,
                              const HyperParams& params, const ObjectiveSuite& suite);
double check_average_dynamics(const OgtState& prev, const OgtState& next, const Draw& draw,
                              const HyperParams& params, const ObjectiveSuite& suite);

/// || mean row of G - mean row of grad F(Q) ||_inf / (1 + ||grad F(Q)||_F).
double tracking_residual(const SsgtState& state, const ObjectiveSuite& suite);
double tracking_residual(const OgtState& state, const ObjectiveSuite& suite);

/// Same identity for the classical trackers: mean S against mean grad F(X).
double tracking_residual(const GtState& state, const ObjectiveSuite& suite);
double tracking_residual(const AccGtState& state, const ObjectiveSuite& suite);

/// || mean U - mean Q ||_inf.
double snapshot_average_residual(const SsgtState& state);
double snapshot_average_residual(const OgtState& state);

/// Max over Zt, Ut, Gt of || mean(top block) - mean(bottom block) ||_inf.
double block_average_residual(const OgtState& state);

/// || M - grad F(Q) ||_inf, i.e. the correctness of the cached snapshot gradient.
double cache_residual(const SsgtState& state, const ObjectiveSuite& suite);
double cache_residual(const OgtState& state, const ObjectiveSuite& suite);

}  // namespace ogt
