#include <benchmark/benchmark.h>

#include "satmdp/agents.hpp"
#include "satmdp/cnf.hpp"
#include "satmdp/epsnet.hpp"
#include "satmdp/gapsat.hpp"
#include "satmdp/generators.hpp"
#include "satmdp/horizon_split.hpp"
#include "satmdp/mdp.hpp"
#include "satmdp/oracle.hpp"
#include "satmdp/reward.hpp"
#include "satmdp/toy_mdp.hpp"

using namespace satmdp;

namespace {

MdpInstance planted_instance(int v, std::int64_t h) {
  const auto pl = gen::planted_formula_retry(v, v + 1, 6, 0.1, 7, 0.6);
  return MdpInstance::build(pl.formula, RewardParams::with_rounds(v, h, 2, 4, 0.1, 6));
}

void BM_RewardG(benchmark::State& st) {
  const auto params = RewardParams::make(static_cast<int>(st.range(0)), 2, 4);
  std::int64_t i = 1;
  int x = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(g(i, x, params));
    if (++x > 2 * params.v) x = 0, i = i % params.h + 1;
  }
}
BENCHMARK(BM_RewardG)->Arg(10)->Arg(1000);

void BM_ClaimRange(benchmark::State& st) {
  const auto params = RewardParams::make(static_cast<int>(st.range(0)), 2, 4);
  for (auto _ : st) benchmark::DoNotOptimize(verify_claim_range(params));
  st.counters["evaluations"] = static_cast<double>(verify_claim_range(params).evaluations);
}
BENCHMARK(BM_ClaimRange)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_MonotoneStep(benchmark::State& st) {
  const auto params = RewardParams::make(static_cast<int>(st.range(0)), 2, 4);
  for (auto _ : st) benchmark::DoNotOptimize(verify_claim_monotone_step(params));
}
BENCHMARK(BM_MonotoneStep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Transition(benchmark::State& st) {
  const auto inst = planted_instance(static_cast<int>(st.range(0)), 3);
  const MdpState s0 = initial_state(inst);
  MdpState s = s0;
  int a = 0;
  for (auto _ : st) {
    s = s.terminal() ? s0 : transition(inst, s, a);
    a = (a + 1) % kNumActions;
  }
}
BENCHMARK(BM_Transition)->Arg(6)->Arg(12);

void BM_FeaturesStateAction(benchmark::State& st) {
  const auto inst = planted_instance(static_cast<int>(st.range(0)), 2);
  const MdpState s = initial_state(inst);
  for (auto _ : st) benchmark::DoNotOptimize(features_state_action(inst, s, 1));
  st.counters["d"] = static_cast<double>(inst.dimension());
}
BENCHMARK(BM_FeaturesStateAction)->Arg(6)->Arg(12);

void BM_ExactDp(benchmark::State& st) {
  const auto inst = planted_instance(static_cast<int>(st.range(0)), 2);
  SatMdpModel model(inst);
  std::size_t states = 0;
  for (auto _ : st) {
    ExactDp dp(model);
    benchmark::DoNotOptimize(dp.value(model.initial_state()));
    states = dp.states_expanded();
  }
  st.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_ExactDp)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BruteForceMaxSat(benchmark::State& st) {
  const Formula f = gen::random_formula(static_cast<int>(st.range(0)), 3 * static_cast<int>(st.range(0)), 3, 5);
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_max_sat(f));
}
BENCHMARK(BM_BruteForceMaxSat)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

void BM_Transform(benchmark::State& st) {
  const Formula f = gen::cube_formula(static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(bounded_occurrence_transform_full(f, 6));
}
BENCHMARK(BM_Transform)->Arg(10)->Arg(100);

void BM_LatticeCount(benchmark::State& st) {
  const LatticeCover cover(static_cast<int>(st.range(0)), 0.1, 3);
  for (auto _ : st) benchmark::DoNotOptimize(cover.count());
}
BENCHMARK(BM_LatticeCount)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_EpsNetToy(benchmark::State& st) {
  ToyTreeMdp::Config c;
  c.d = 2;
  c.H = 3;
  const ToyTreeMdp toy(c);
  for (auto _ : st) {
    SimulatedOracle oracle(toy, 1);
    benchmark::DoNotOptimize(epsilon_net_search(oracle, EpsNetOptions{}));
  }
}
BENCHMARK(BM_EpsNetToy)->Unit(benchmark::kMillisecond);

void BM_HorizonSplitToy(benchmark::State& st) {
  ToyTreeMdp::Config c;
  c.d = 2;
  c.H = 4;
  c.shape = ToyTreeMdp::RewardShape::PerStep;
  const ToyTreeMdp toy(c);
  for (auto _ : st) {
    SimulatedOracle oracle(toy, 1);
    benchmark::DoNotOptimize(horizon_split_policy(oracle, 0.1, 0.1));
  }
}
BENCHMARK(BM_HorizonSplitToy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
