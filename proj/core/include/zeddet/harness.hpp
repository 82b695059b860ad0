#ifndef ZEDDET_HARNESS_HPP
#define ZEDDET_HARNESS_HPP

#include "zeddet/channel.hpp"
#include "zeddet/detect.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace zeddet {

/// Scenario-level tag template; realized into a ZedConfig per run/trial.
struct TagSpec {
  BitSequence code;
  FskParams fsk;
  double t_seq_seconds = 0.0;
  double t_wait_seconds = 0.0;
  double reflect_amp = 0.0;
  double reflect_phase_rad = 0.0;
  bool reflect_random_phase = false;  // independent phase per subcarrier
  bool randomize_offset = true;
  double start_offset_seconds = 0.0;  // used when randomize_offset is false
  double offset_quantum_seconds = 0.0;  // 0 -> half an F0 period

  double cycle_seconds() const { return t_seq_seconds + t_wait_seconds; }
};

/// One experiment: scenario plus run parameters. Parsed from a scenario file.
struct TrialSpec {
  GridParams grid;
  NoiseModel noise;  // noise.seed is ignored; seed_base below governs all draws
  double gamma_amp = 1.0;
  double gamma_phase_rad = 0.0;
  bool gamma_random_phase = false;
  std::vector<TagSpec> tags;
  DetectorConfig detector;
  // receiver-side search code and tones; default to the first tag's
  BitSequence rx_code;
  FskParams rx_fsk;

  std::vector<double> p_fa_targets;
  int n_trials = 1;
  std::int64_t calibration_windows = 20000;
  double t_obs_seconds = 0.0;    // 0 -> min tag cycle
  double capture_seconds = 0.0;  // 0 -> t_obs + longest code span
  std::uint64_t seed_base = 1;
  double g_psl_db = 0.0;  // 0 -> psl_db of the first tag's code
  double margin_db = 6.0;
  std::vector<double> margins_db;
  std::vector<double> roc_eta2;

  double effective_t_obs() const;
  double effective_capture() const;
  double effective_g_psl_db() const;
  void validate() const;
};

struct H0Calibration {
  double var_hat = 0.0;
  double mean = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::int64_t n_windows = 0;
  bool insufficient = false;  // fewer than 1000 windows
};

/// Sample statistics of R_M over non-overlapping windows of zero-tag
/// captures (n_windows of them, chunked and seeded from seed_base).
H0Calibration calibrate_h0(const TrialSpec& spec, std::int64_t n_windows = 0);

/// Closed-form H0 variance of R_M from the noise level and (uniform) window
/// counts; valid without phase jitter, where the direct path cancels exactly.
double analytic_h0_variance(double sigma2, const CorrelatorCounts& counts,
                            std::size_t code_len, int subcarriers);

/// Empirical exceedance rates of R_M over the given thresholds, measured on
/// fresh independent zero-tag windows.
std::vector<double> h0_exceedance(const TrialSpec& spec, std::span<const double> r_stars,
                                  std::int64_t n_windows);

struct TrialMetrics {
  std::int64_t trials = 0;
  std::int64_t windows = 0;
  std::int64_t correct_detections = 0;
  std::int64_t missed_detections = 0;
  std::int64_t false_alarms = 0;
  std::int64_t secondary_eligible = 0;
  std::int64_t secondary_correct = 0;
  std::int64_t secondary_missed = 0;
  std::int64_t secondary_false_alarms = 0;
  // exceedance of R_M at the ground-truth alignment, one rate per p_fa target
  std::vector<std::pair<double, double>> p_d_obs;
  double mean_abs_timing_error_strides = 0.0;
  std::int64_t max_abs_timing_error_strides = 0;
  double var_hat = 0.0;
};

/// Independent single-tag trials: synthesize, detect, classify the primary
/// peak against ground truth (correct iff within +-1 stride) and record the
/// truth-aligned exceedance rate per p_fa target.
TrialMetrics run_single_tag(const TrialSpec& spec);

/// Per-observation-window primary/secondary accounting over one long two-tag
/// capture (trial w = window w).
TrialMetrics run_two_tag(const TrialSpec& spec);

struct MarginSweepRow {
  double margin_db = 0.0;
  std::int64_t false_alarms = 0;
  std::int64_t missed_detections = 0;
  std::int64_t eligible = 0;
  std::int64_t windows = 0;
};

/// Re-runs the secondary detection of a two-tag capture across margin
/// factors; the trace and primary peaks are computed once.
std::vector<MarginSweepRow> margin_sweep(const TrialSpec& spec,
                                         std::span<const double> margins_db);

struct RocRow {
  double eta2 = 0.0;   // mean of R_M at the aligned peak
  double p_fa = 0.0;
  double r_star = 0.0;
  double p_d_predicted = 0.0;
  double p_d_observed = 0.0;
  std::int64_t trials = 0;
};

/// Predicted-versus-observed detection probability over an eta^2 x p_fa grid.
/// eta2 values are contrast-peak means; tag amplitudes are placed by a
/// noise-free calibration run. Observed rates are truth-aligned exceedances.
std::vector<RocRow> roc_sweep(const TrialSpec& spec, std::span<const double> eta2_grid,
                              std::span<const double> p_fa_grid);

/// Amplitude scale placing a second tag at `rel_db` relative peak level on
/// the contrast-dB axis (peak ratio 10^(rel_db/20), amplitude 10^(rel_db/40)).
double amp_scale_for_relative_peak_db(double rel_db);

/// Realized per-window record of a two-tag run, for CSV export.
struct TwoTagWindowRow {
  std::int64_t window = 0;
  std::int64_t primary_index = -1;
  double primary_db = 0.0;
  bool primary_correct = false;
  std::int64_t truth_strong = -1;
  std::int64_t truth_weak = -1;  // -1 when not eligible in this window
  std::int64_t secondary_index = -1;
  double secondary_db = 0.0;
  bool secondary_correct = false;
};

struct TwoTagAnalysis {
  ContrastTrace trace;
  double var_hat = 0.0;
  double r_star = 0.0;
  std::int64_t obs_strides = 0;
  std::int64_t window_count = 0;
  std::vector<std::int64_t> truth_strong;  // contrast indices of sequence starts
  std::vector<std::int64_t> truth_weak;
};

/// Shared heavy part of run_two_tag / margin_sweep.
TwoTagAnalysis analyze_two_tag(const TrialSpec& spec);

/// Classification of one analysis at a given margin factor.
std::pair<TrialMetrics, std::vector<TwoTagWindowRow>> classify_two_tag(
    const TrialSpec& spec, const TwoTagAnalysis& analysis, double margin_db);

} // namespace zeddet

#endif
