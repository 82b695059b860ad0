#ifndef ZEDDET_CHANNEL_HPP
#define ZEDDET_CHANNEL_HPP

#include "zeddet/sequences.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace zeddet {

using cplx = std::complex<double>;

/// LTE-style reference-signal grid timing: K = 4*N_RB subcarriers carry RS,
/// two RS-bearing OFDM symbols per 14-symbol TTI.
struct GridParams {
  int n_rb = 0;
  double t_ofdm_seconds = 0.0;
  std::array<int, 2> rs_symbol_indices{0, 7};
  double pilot_power = 1.0;  // P_u, pilot amplitude is sqrt(P_u)

  static constexpr int symbols_per_tti = 14;

  int subcarriers() const { return 4 * n_rb; }
  double tti_seconds() const { return symbols_per_tti * t_ofdm_seconds; }

  void validate() const;
};

/// Time of RS sample l (same for every subcarrier): RS l lives in TTI l/2 at
/// OFDM symbol rs_symbol_indices[l%2].
double rs_time(const GridParams& grid, std::int64_t l);

/// Mean spacing between consecutive RS samples (exact spacing when the two
/// RS symbols are 7 apart).
double rs_spacing(const GridParams& grid);

enum class PhaseJitter {
  none,             // phi = 0 everywhere
  per_tti_uniform,  // phi ~ U[0,2pi) i.i.d. per TTI, shared by all subcarriers
};

struct NoiseModel {
  double sigma2 = 0.0;  // E|alpha|^2 of the complex Gaussian noise
  PhaseJitter jitter = PhaseJitter::none;
  std::uint64_t seed = 0;
};

/// Direct channel response Gamma(k); size 1 broadcasts to all subcarriers.
struct ChannelCoeffs {
  std::vector<cplx> gamma{cplx(0.0, 0.0)};

  cplx gamma_at(int k) const {
    return gamma.size() == 1 ? gamma[0] : gamma[static_cast<std::size_t>(k)];
  }
  void validate(int subcarriers) const;
};

/// One tag's behavioral description: code, tones, cycle timing, reflection
/// coefficients and its cycle misalignment against the receiver clock.
struct ZedConfig {
  BitSequence code;
  FskParams fsk;
  double t_seq_seconds = 0.0;   // = N_b * T_b
  double t_wait_seconds = 0.0;  // transparent (idle) portion of each cycle
  std::vector<cplx> reflect{cplx(0.0, 0.0)};  // Lambda(k)Phi(k); size 1 broadcasts
  double start_offset_seconds = 0.0;

  double cycle_seconds() const { return t_seq_seconds + t_wait_seconds; }
  cplx reflect_at(int k) const {
    return reflect.size() == 1 ? reflect[0] : reflect[static_cast<std::size_t>(k)];
  }

  /// True iff the tag is mid-sequence at receiver time t; if so, seq_time
  /// receives the position within the tag's own sequence clock.
  bool active_at(double t, double* seq_time) const;

  void validate(const GridParams& grid) const;
};

/// Complex RS samples y(k,l) for a capture, row-major per subcarrier.
struct ResourceGrid {
  GridParams params;
  std::int64_t rs_count = 0;
  std::vector<cplx> samples;  // [k * rs_count + l]

  cplx at(int k, std::int64_t l) const {
    return samples[static_cast<std::size_t>(k) * static_cast<std::size_t>(rs_count) +
                   static_cast<std::size_t>(l)];
  }
  double time_of(std::int64_t l) const { return rs_time(params, l); }
};

/// Deterministic synthesizer for y(k,l) = e^{j phi(k,l)} sqrt(P_u) [Gamma(k)
/// + sum_tags 1_tag(l) reflect(k) x_tag(t(l))] + alpha(k,l). Rows can be
/// generated independently so large captures never need materializing.
class GridSynthesizer {
public:
  GridSynthesizer(GridParams grid, std::vector<ZedConfig> tags, ChannelCoeffs chans,
                  NoiseModel noise, double duration_seconds);

  const GridParams& grid() const { return grid_; }
  std::int64_t rs_count() const { return rs_count_; }
  double time_of(std::int64_t l) const { return rs_time(grid_, l); }

  /// Fill out[0..rs_count) with subcarrier k's samples.
  void row(int k, std::span<cplx> out) const;

  ResourceGrid materialize() const;

private:
  GridParams grid_;
  std::vector<ZedConfig> tags_;
  ChannelCoeffs chans_;
  NoiseModel noise_;
  std::int64_t rs_count_ = 0;
  std::vector<double> tti_phase_;  // one jitter phase per TTI
};

/// Convenience wrapper producing a whole grid; bit-identical for identical
/// (params, seed).
ResourceGrid synthesize(const GridParams& grid, const std::vector<ZedConfig>& tags,
                        const ChannelCoeffs& chans, const NoiseModel& noise,
                        double duration_seconds);

/// The published experiment constants, verbatim. T_ofdm here is the stated
/// 71.35 us, which is not commensurate with the FSK bit grid (see
/// simulation_grid() for the runnable variant).
struct PaperScenarioParams {
  double bandwidth_hz = 2.5e6;
  int fft_size = 128;
  int cp_samples = 8;
  GridParams grid;       // T_ofdm = 71.35 us, rs symbols {0,7}
  FskParams fsk;         // F0 = 125 Hz, F1 = 500 Hz, T_b = 32 ms
  double t_seq_seconds = 0.8;
  double t_cycle_a_seconds = 1.4;
  double t_cycle_b_seconds = 2.2;
  double t_wait_a_seconds = 0.6;
  double t_wait_b_seconds = 1.4;
  double g_psl_db = 21.93;
  double margin_db = 6.0;
};

PaperScenarioParams paper_scenario_params();

/// Grid actually used for simulation: TTI = 1 ms exactly (T_ofdm = 1000/14 us)
/// so the published FSK tones and cycle timings are representable with a
/// whole number of TTIs per bit.
GridParams simulation_grid(int n_rb);

} // namespace zeddet

#endif
