#include <benchmark/benchmark.h>

#include "ogt/algorithms.hpp"
#include "ogt/eigen_jacobi.hpp"
#include "ogt/graph.hpp"
#include "ogt/objective.hpp"
#include "ogt/rng.hpp"

using namespace ogt;

namespace {

HyperParams busy_params(double eta_w) {
  HyperParams p{0.05, 0.0025, 0.0, 0.5, 0.05, 0.3, 0.3, eta_w};
  p.gamma = coupling_gamma(p.alpha, p.tau);
  return p;
}

void BM_StepSsgt(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const GossipMatrix w = build_ring(n);
  const ObjectiveSuite suite = synth_quadratic(n, 4, 10.0, 1);
  const HyperParams p = busy_params(0.0);
  GradientCounter counter;
  CoupledBernoulliStream stream(1, p.p, p.q);
  SsgtState s = init_ssgt(Matrix::Zero(n, 4), suite, counter);
  for (auto _ : st) {
    s = step_ssgt(s, w, p, stream, suite, counter);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_StepSsgt)->Arg(8)->Arg(50)->Arg(200);

void BM_StepOgt(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const GossipMatrix w = build_ring(n);
  const ObjectiveSuite suite = synth_quadratic(n, 4, 10.0, 1);
  const HyperParams p = busy_params(spectral_constants(spectral_gap(w)).eta_w);
  GradientCounter counter;
  CoupledBernoulliStream stream(1, p.p, p.q);
  OgtState s = init_ogt(Matrix::Zero(n, 4), suite, counter);
  for (auto _ : st) {
    s = step_ogt(s, w, p, stream, suite, counter);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_StepOgt)->Arg(8)->Arg(50)->Arg(200);

void BM_ApplyAugmented(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const GossipMatrix w = build_metropolis_lazy(n, ring_edges(n));
  const Matrix s = Matrix::Random(2 * n, 4);
  for (auto _ : st) benchmark::DoNotOptimize(apply_augmented(w, 0.9, s).data());
}
BENCHMARK(BM_ApplyAugmented)->Arg(50)->Arg(200);

void BM_JacobiEigenvalues(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Matrix w = build_ring(n).weights;
  for (auto _ : st) benchmark::DoNotOptimize(symmetric_eigenvalues(w).data());
}
BENCHMARK(BM_JacobiEigenvalues)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
