#include <algorithm>

#include "ogt/algorithms.hpp"

namespace ogt {

namespace {

double inf_norm(const Point& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Matrix fresh_grad(const ObjectiveSuite& suite, const Matrix& x) {
  GradientCounter scratch;
  return suite.grad_all(x, scratch);
}

// Averaged one-step recursion shared by SS-GT and OGT. The arguments are the
// n-row views (Z, U, G are top blocks for OGT).
double average_dynamics_residual(const Matrix& x, const Matrix& y, const Matrix& z, const Matrix& u,
                                 const Matrix& g, const Matrix& z_next, const Matrix& y_next,
                                 const Matrix& u_next, const Matrix& q_next, const Matrix& g_next,
                                 const Draw& draw, const HyperParams& hp, const ObjectiveSuite& suite) {
  const Point xa = row_mean(x);
  const Point ya = row_mean(y);
  const Point za = row_mean(z);
  const Point ua = row_mean(u);
  const Point ga = row_mean(g);
  const Point da = row_mean(fresh_grad(suite, x));

  const Point xa_expected = (1.0 - hp.alpha - hp.tau) * ya + hp.alpha * za + hp.tau * ua;
  const Point za_next =
      (za + hp.beta * xa - hp.eta * ga + (draw.zeta * hp.eta) * (ga - da)) / (1.0 + hp.beta);
  const Point ya_next = xa + hp.gamma * (za_next - za);
  const Point ua_next = draw.xi ? xa : ua;
  const Point ga_next = row_mean(fresh_grad(suite, q_next));

  double r = inf_norm(xa - xa_expected);
  r = std::max(r, inf_norm(row_mean(z_next) - za_next));
  r = std::max(r, inf_norm(row_mean(y_next) - ya_next));
  r = std::max(r, inf_norm(row_mean(u_next) - ua_next));
  r = std::max(r, inf_norm(row_mean(q_next) - ua_next));
  r = std::max(r, inf_norm(row_mean(g_next) - ga_next));
  return r;
}

double tracking(const Matrix& tracker, const Matrix& reference_grad) {
  return inf_norm(row_mean(tracker) - row_mean(reference_grad)) / (1.0 + reference_grad.norm());
}

}  // namespace

double check_average_dynamics(const SsgtState& prev, const SsgtState& next, const Draw& draw,
                              const HyperParams& params, const ObjectiveSuite& suite) {
  return average_dynamics_residual(prev.x, prev.y, prev.z, prev.u, prev.g, next.z, next.y, next.u, next.q,
                                   next.g, draw, params, suite);
}

double check_average_dynamics(const OgtState& prev, const OgtState& next, const Draw& draw,
                              const HyperParams& params, const ObjectiveSuite& suite) {
  const Eigen::Index n = prev.x.rows();
  return average_dynamics_residual(prev.x, prev.y, prev.zt.topRows(n), prev.ut.topRows(n), prev.gt.topRows(n),
                                   next.zt.topRows(n), next.y, next.ut.topRows(n), next.q, next.gt.topRows(n),
                                   draw, params, suite);
}

double tracking_residual(const SsgtState& s, const ObjectiveSuite& suite) {
  return tracking(s.g, fresh_grad(suite, s.q));
}

double tracking_residual(const OgtState& s, const ObjectiveSuite& suite) {
  return tracking(s.gt.topRows(s.x.rows()), fresh_grad(suite, s.q));
}

double tracking_residual(const GtState& s, const ObjectiveSuite& suite) {
  return tracking(s.s, fresh_grad(suite, s.x));
}

double tracking_residual(const AccGtState& s, const ObjectiveSuite& suite) {
  return tracking(s.s, fresh_grad(suite, s.x));
}

double snapshot_average_residual(const SsgtState& s) { return inf_norm(row_mean(s.u) - row_mean(s.q)); }

double snapshot_average_residual(const OgtState& s) {
  return inf_norm(row_mean(s.ut.topRows(s.x.rows())) - row_mean(s.q));
}

double block_average_residual(const OgtState& s) {
  const Eigen::Index n = s.x.rows();
  double r = 0.0;
  for (const Matrix* m : {&s.zt, &s.ut, &s.gt})
    r = std::max(r, inf_norm(row_mean(m->topRows(n)) - row_mean(m->bottomRows(n))));
  return r;
}

double cache_residual(const SsgtState& s, const ObjectiveSuite& suite) {
  return (s.m - fresh_grad(suite, s.q)).cwiseAbs().maxCoeff();
}

double cache_residual(const OgtState& s, const ObjectiveSuite& suite) {
  return (s.m - fresh_grad(suite, s.q)).cwiseAbs().maxCoeff();
}

}  // namespace ogt
