#include "zeddet/channel.hpp"

#include "zeddet/errors.hpp"
#include "zeddet/rng.hpp"

#include <cmath>
#include <numbers>

namespace zeddet {

void GridParams::validate() const {
  if (n_rb <= 0) throw ConfigError("grid: n_rb must be >= 1");
  if (t_ofdm_seconds <= 0.0) throw ConfigError("grid: t_ofdm must be > 0");
  if (pilot_power <= 0.0) throw ConfigError("grid: pilot_power must be > 0");
  for (int s : rs_symbol_indices) {
    if (s < 0 || s >= symbols_per_tti)
      throw ConfigError("grid: rs_symbol_indices must lie in [0, 14)");
  }
  if (rs_symbol_indices[1] <= rs_symbol_indices[0])
    throw ConfigError("grid: rs_symbol_indices must be increasing");
}

double rs_time(const GridParams& grid, std::int64_t l) {
  const std::int64_t tti = l / 2;
  const int sym = grid.rs_symbol_indices[static_cast<std::size_t>(l % 2)];
  return (static_cast<double>(tti) * GridParams::symbols_per_tti + sym) *
         grid.t_ofdm_seconds;
}

double rs_spacing(const GridParams& grid) { return grid.tti_seconds() / 2.0; }

void ChannelCoeffs::validate(int subcarriers) const {
  if (gamma.size() != 1 && gamma.size() != static_cast<std::size_t>(subcarriers))
    throw ConfigError("channel: gamma must have 1 or K entries");
}

bool ZedConfig::active_at(double t, double* seq_time) const {
  const double cycle = cycle_seconds();
  double u = std::fmod(t - start_offset_seconds, cycle);
  if (u < 0.0) u += cycle;
  if (u < t_wait_seconds) return false;
  if (seq_time) *seq_time = u - t_wait_seconds;
  return true;
}

void ZedConfig::validate(const GridParams& grid) const {
  const double expected_seq = static_cast<double>(code.size()) * fsk.bit_seconds;
  if (std::abs(t_seq_seconds - expected_seq) > 1e-9)
    throw ConfigError("tag: t_seq must equal N_b * T_b");
  if (t_wait_seconds < 0.0) throw ConfigError("tag: t_wait must be >= 0");
  if (reflect.size() != 1 && reflect.size() != static_cast<std::size_t>(grid.subcarriers()))
    throw ConfigError("tag: reflect must have 1 or K entries");
  // The bit grid must tile the TTI grid, otherwise per-bit sample counts vary.
  const double ttis_per_bit = fsk.bit_seconds / grid.tti_seconds();
  if (std::abs(ttis_per_bit - std::round(ttis_per_bit)) > 1e-6)
    throw ConfigError("tag: bit duration must be a whole number of TTIs for this grid");
}

GridSynthesizer::GridSynthesizer(GridParams grid, std::vector<ZedConfig> tags,
                                 ChannelCoeffs chans, NoiseModel noise,
                                 double duration_seconds)
    : grid_(grid), tags_(std::move(tags)), chans_(std::move(chans)), noise_(noise) {
  grid_.validate();
  chans_.validate(grid_.subcarriers());
  if (duration_seconds <= 0.0) throw ConfigError("synthesize: duration must be > 0");
  for (const auto& tag : tags_) {
    tag.validate(grid_);
    if (duration_seconds < tag.cycle_seconds())
      throw ConfigError("synthesize: duration must cover at least one full cycle of every tag");
  }
  // number of RS instants strictly before `duration`
  const std::int64_t full_ttis =
      static_cast<std::int64_t>(duration_seconds / grid_.tti_seconds());
  std::int64_t l = full_ttis * 2;
  while (rs_time(grid_, l) < duration_seconds) ++l;
  while (l > 0 && rs_time(grid_, l - 1) >= duration_seconds) --l;
  rs_count_ = l;
  if (rs_count_ <= 0) throw ConfigError("synthesize: duration too short for any RS sample");

  const std::int64_t n_ttis = (rs_count_ + 1) / 2;
  tti_phase_.assign(static_cast<std::size_t>(n_ttis), 0.0);
  if (noise_.jitter == PhaseJitter::per_tti_uniform) {
    Rng jitter_rng(Rng::derive(noise_.seed, 0xfeed));
    for (auto& p : tti_phase_) p = 2.0 * std::numbers::pi * jitter_rng.uniform();
  }
}

void GridSynthesizer::row(int k, std::span<cplx> out) const {
  if (out.size() < static_cast<std::size_t>(rs_count_))
    throw ConfigError("synthesize: row buffer too small");
  const double amp = std::sqrt(grid_.pilot_power);
  const cplx gamma = chans_.gamma_at(k);
  // noise substream keyed by subcarrier so rows are independent of each other
  // and of the tag list
  Rng noise_rng(Rng::derive(noise_.seed, 0x1000 + static_cast<std::uint64_t>(k)));
  for (std::int64_t l = 0; l < rs_count_; ++l) {
    const double t = rs_time(grid_, l);
    cplx bracket = gamma;
    for (const auto& tag : tags_) {
      double seq_time = 0.0;
      if (tag.active_at(t, &seq_time)) {
        const int x = reflection_state(tag.code, tag.fsk, seq_time);
        if (x != 0) bracket += tag.reflect_at(k) * static_cast<double>(x);
      }
    }
    cplx y = amp * bracket;
    const double phi = tti_phase_[static_cast<std::size_t>(l / 2)];
    if (phi != 0.0) y *= cplx(std::cos(phi), std::sin(phi));
    if (noise_.sigma2 > 0.0) y += noise_rng.complex_gaussian(noise_.sigma2);
    out[static_cast<std::size_t>(l)] = y;
  }
}

ResourceGrid GridSynthesizer::materialize() const {
  ResourceGrid g;
  g.params = grid_;
  g.rs_count = rs_count_;
  const int K = grid_.subcarriers();
  g.samples.resize(static_cast<std::size_t>(K) * static_cast<std::size_t>(rs_count_));
  for (int k = 0; k < K; ++k) {
    std::span<cplx> row_span(g.samples.data() +
                                 static_cast<std::size_t>(k) * static_cast<std::size_t>(rs_count_),
                             static_cast<std::size_t>(rs_count_));
    row(k, row_span);
  }
  return g;
}

ResourceGrid synthesize(const GridParams& grid, const std::vector<ZedConfig>& tags,
                        const ChannelCoeffs& chans, const NoiseModel& noise,
                        double duration_seconds) {
  return GridSynthesizer(grid, tags, chans, noise, duration_seconds).materialize();
}

PaperScenarioParams paper_scenario_params() {
  PaperScenarioParams p;
  p.grid.n_rb = 6;
  p.grid.t_ofdm_seconds = 71.35e-6;
  p.grid.rs_symbol_indices = {0, 7};
  p.grid.pilot_power = 1.0;
  p.fsk = FskParams::make(125.0, 500.0, 32e-3);
  p.t_wait_a_seconds = p.t_cycle_a_seconds - p.t_seq_seconds;
  p.t_wait_b_seconds = p.t_cycle_b_seconds - p.t_seq_seconds;
  return p;
}

GridParams simulation_grid(int n_rb) {
  GridParams g;
  g.n_rb = n_rb;
  g.t_ofdm_seconds = 1e-3 / GridParams::symbols_per_tti;
  g.rs_symbol_indices = {0, 7};
  g.pilot_power = 1.0;
  return g;
}

} // namespace zeddet
