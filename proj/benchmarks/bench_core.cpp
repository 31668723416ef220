#include <benchmark/benchmark.h>

#include "mnlb/adversarial.hpp"
#include "mnlb/divergence.hpp"
#include "mnlb/experiment.hpp"
#include "mnlb/mnl.hpp"
#include "mnlb/policies.hpp"

namespace {

using namespace mnlb;

void BM_SampleChoice(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  const auto instance = build_instance(AdversarialSpec(4 * k, k, 0.1, Assortment::first(k)));
  const auto dist = choice_distribution(instance, Assortment::first(k));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_choice(dist, rng));
}
BENCHMARK(BM_SampleChoice)->Arg(4)->Arg(25)->Arg(100);

// Exhaustive search cost grows as sum_{k<=K} C(N, k).
void BM_BestAssortmentEnumeration(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::vector<double> r(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    r[static_cast<std::size_t>(j)] = 1.0 - 0.03 * j;
    v[static_cast<std::size_t>(j)] = 0.2 + 0.05 * j;
  }
  const MnlInstance instance(4, r, v);
  for (auto _ : state) benchmark::DoNotOptimize(best_assortment(instance));
}
BENCHMARK(BM_BestAssortmentEnumeration)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void BM_PerStepKl(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  const auto ctx = StepKlContext::canonical(0.25, k, k, k - 1);
  for (auto _ : state) benchmark::DoNotOptimize(per_step_kl(ctx).exact);
}
BENCHMARK(BM_PerStepKl)->Arg(2)->Arg(20);

void BM_ProofChainAudit(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(proof_chain_audit(100, 40000, 25, epsilon_schedule(100, 40000)));
  }
}
BENCHMARK(BM_ProofChainAudit);

void BM_TrajectoryEpochUcb(benchmark::State& state) {
  const std::int64_t horizon = state.range(0);
  const auto instance = build_instance(
      AdversarialSpec(16, 4, epsilon_schedule(16, horizon), Assortment{2, 5, 9, 13}));
  for (auto _ : state) {
    EpochUcbPolicy policy(16);
    benchmark::DoNotOptimize(run_trajectory(policy, instance, horizon, 42).trace.cumulative);
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_TrajectoryEpochUcb)->Arg(1024)->Arg(16384)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
