#include <benchmark/benchmark.h>

#include "zeddet/channel.hpp"
#include "zeddet/contrast.hpp"
#include "zeddet/detect.hpp"
#include "zeddet/filter.hpp"
#include "zeddet/np.hpp"

using namespace zeddet;

namespace {

GridSynthesizer make_synth(double seconds, int n_rb) {
  GridParams grid = simulation_grid(n_rb);
  ZedConfig tag;
  tag.code = npc25();
  tag.fsk = FskParams::make(125.0, 500.0, 32e-3);
  tag.t_seq_seconds = 0.8;
  tag.t_wait_seconds = 0.6;
  tag.reflect = {cplx(0.05, 0.0)};
  ChannelCoeffs chans;
  chans.gamma = {cplx(1.0, 0.0)};
  NoiseModel noise;
  noise.sigma2 = 0.1;
  noise.seed = 42;
  return GridSynthesizer(grid, {tag}, chans, noise, seconds);
}

void BM_SynthesizeRow(benchmark::State& state) {
  const auto synth = make_synth(static_cast<double>(state.range(0)), 1);
  std::vector<cplx> row(static_cast<std::size_t>(synth.rs_count()));
  for (auto _ : state) {
    synth.row(0, row);
    benchmark::DoNotOptimize(row.data());
  }
  state.SetItemsProcessed(state.iterations() * synth.rs_count());
}
BENCHMARK(BM_SynthesizeRow)->Arg(2)->Arg(8);

void BM_CorrelateRow(benchmark::State& state) {
  const auto synth = make_synth(static_cast<double>(state.range(0)), 1);
  const auto fsk = FskParams::make(125.0, 500.0, 32e-3);
  const TraceBuilder tb(synth.grid(), fsk, synth.rs_count());
  std::vector<cplx> row(static_cast<std::size_t>(synth.rs_count()));
  synth.row(0, row);
  std::vector<cplx> e0(static_cast<std::size_t>(tb.window_count()));
  std::vector<cplx> e1(e0.size());
  for (auto _ : state) {
    tb.correlate_row(row, e0, e1);
    benchmark::DoNotOptimize(e0.data());
  }
  state.SetItemsProcessed(state.iterations() * tb.window_count());
}
BENCHMARK(BM_CorrelateRow)->Arg(2)->Arg(8);

void BM_Pipeline(benchmark::State& state) {
  const auto synth = make_synth(4.0, static_cast<int>(state.range(0)));
  const auto fsk = FskParams::make(125.0, 500.0, 32e-3);
  DetectorConfig cfg;
  cfg.lowpass_enabled = true;
  for (auto _ : state) {
    auto trace = run_pipeline(synth, npc25(), fsk, 0.1, cfg);
    benchmark::DoNotOptimize(trace.r_m.data());
  }
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(6);

void BM_Filtfilt(benchmark::State& state) {
  const auto sos = butterworth_lowpass(4, 100.0, 2000.0);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * static_cast<double>(i));
  for (auto _ : state) {
    auto y = filtfilt(sos, x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Filtfilt)->Range(1 << 12, 1 << 16);

void BM_QInverse(benchmark::State& state) {
  double p = 1e-7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_inverse(p));
    p = p < 0.4 ? p * 1.01 : 1e-7;
  }
}
BENCHMARK(BM_QInverse);

} // namespace

BENCHMARK_MAIN();
