#include <benchmark/benchmark.h>

#include "dlr/fidelity.hpp"
#include "dlr/sampling.hpp"
#include "dlr/shaping.hpp"
#include "dlr/spectral.hpp"

using namespace dlr;

namespace {

Waveform rc_pulse(double t_gate) {
  return materialize(calibrate_amplitude(PulseSpec{RaisedCosine{}, t_gate, 1.0, Plain{}}));
}

void BM_Propagate(benchmark::State& state) {
  const auto w = rc_pulse(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(w, SystemParams{}));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.size()));
}
BENCHMARK(BM_Propagate)->Arg(10)->Arg(50)->Arg(200);

void BM_FourierAt(benchmark::State& state) {
  const auto w = rc_pulse(50.0);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_at(w, 0.1));
}
BENCHMARK(BM_FourierAt);

void BM_Magnus2(benchmark::State& state) {
  const auto w = rc_pulse(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(magnus2_delta(w, 0.1));
}
BENCHMARK(BM_Magnus2)->Arg(10)->Arg(50);

void BM_CzFidelity(benchmark::State& state) {
  const auto w = rc_pulse(50.0);
  for (auto _ : state) benchmark::DoNotOptimize(cz_fidelity(w, SystemParams{}));
}
BENCHMARK(BM_CzFidelity);

void BM_DlrDynamicPulse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dlr_dynamic(RaisedCosine{}, 50.0, 0.1));
}
BENCHMARK(BM_DlrDynamicPulse);

void BM_ZeroOrderHold(benchmark::State& state) {
  const auto w = rc_pulse(50.0);
  for (auto _ : state) benchmark::DoNotOptimize(zero_order_hold(w, SamplingConfig{0.16}));
}
BENCHMARK(BM_ZeroOrderHold);

}  // namespace

BENCHMARK_MAIN();
