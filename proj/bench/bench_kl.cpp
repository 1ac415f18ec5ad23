#include <benchmark/benchmark.h>

#include "klcells/kl.hpp"

using namespace klc;

namespace {

const char* const kTypes[] = {"B3", "H3", "B4", "F4"};

void run(benchmark::State& state, bool parallel) {
  const auto W = CoxeterSystem::build(CoxeterSpec::parse(kTypes[state.range(0)]));
  const auto params = ParamAssignment::from_weights(W.spec(), std::vector<int>(W.rank(), 1));
  for (auto _ : state) {
    auto kl = parallel ? compute_kl(W, params, MonomialOrder::single())
                       : compute_kl_serial(W, params, MonomialOrder::single());
    benchmark::DoNotOptimize(kl.P.rows.data());
  }
  state.SetLabel(kTypes[state.range(0)]);
}

void BM_parallel(benchmark::State& state) { run(state, true); }
void BM_serial(benchmark::State& state) { run(state, false); }

void BM_generic_parallel(benchmark::State& state) {
  const auto W = CoxeterSystem::build(CoxeterSpec::parse(kTypes[state.range(0)]));
  const auto params = ParamAssignment::generic(W.spec());
  for (auto _ : state) benchmark::DoNotOptimize(compute_kl(W, params, MonomialOrder::lex2(1)).P.rows.data());
  state.SetLabel(kTypes[state.range(0)]);
}

void BM_generic_serial(benchmark::State& state) {
  const auto W = CoxeterSystem::build(CoxeterSpec::parse(kTypes[state.range(0)]));
  const auto params = ParamAssignment::generic(W.spec());
  for (auto _ : state) benchmark::DoNotOptimize(compute_kl_serial(W, params, MonomialOrder::lex2(1)).P.rows.data());
  state.SetLabel(kTypes[state.range(0)]);
}

}  // namespace

BENCHMARK(BM_parallel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_serial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generic_parallel)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generic_serial)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
