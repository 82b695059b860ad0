#ifndef ZEDDET_DETECT_HPP
#define ZEDDET_DETECT_HPP

#include "zeddet/channel.hpp"
#include "zeddet/contrast.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace zeddet {

/// Contrast peak levels in dB use 20*log10 of the contrast value: in this
/// square-law pipeline the ratio of a code sidelobe to the main peak equals
/// max|rho|/N_b, so the factor-20 log places sidelobes exactly G_PSL below
/// the peak, on the same axis as the binary-code PSL.
double peak_db(double contrast_value);

struct Peak {
  std::int64_t index = 0;
  double value = 0.0;
  double level_db = 0.0;
};

/// Largest contrast sample in [begin, end); a peak only if it exceeds r_star.
/// Ties resolve to the lowest index.
std::optional<Peak> detect_primary(std::span<const double> r_m, double r_star,
                                   std::int64_t begin, std::int64_t end);

/// Side-lobe suppression threshold s = P0_dB - G_PSL + M.
double secondary_threshold_db(double p0_db, double g_psl_db, double margin_db);

/// Searches +-search_half_width indices around the primary, excluding
/// +-exclusion_half_width (the primary's main lobe), for the largest sample
/// exceeding both r_star and s.
std::optional<Peak> detect_secondary(std::span<const double> r_m, const Peak& primary,
                                     double r_star, double s_db,
                                     std::int64_t search_half_width,
                                     std::int64_t exclusion_half_width);

/// Receive-pipeline knobs (Fig.-4 order: correlators -> low-pass -> contrast).
struct DetectorConfig {
  bool lowpass_enabled = true;
  double lowpass_cutoff_hz = 100.0;
  int lowpass_order = 4;
  int exclusion_bits = 2;  // secondary-search exclusion half-width, in bit durations
  bool keep_per_subcarrier = false;
  int workers = 1;
};

/// Full pipeline over a capture: per-subcarrier dual correlators, optional
/// zero-phase low-pass at the RS rate, code contrast, multi-frequency
/// combining. Deterministic for fixed (synth seed, workers).
ContrastTrace run_pipeline(const GridSynthesizer& synth, const BitSequence& code,
                           const FskParams& fsk, double sigma2, const DetectorConfig& cfg);

struct DetectionReport {
  std::optional<Peak> primary;
  std::optional<Peak> secondary;
  double r_star = 0.0;
  double s_db = 0.0;               // valid when primary exists
  double g_psl_db = 0.0;
  double margin_db = 0.0;
  double stride_seconds = 0.0;

  std::string to_text() const;
};

/// Primary + secondary detection over one observation window of the trace.
/// t_obs bounds both the primary window and the centered secondary search.
DetectionReport detect_window(const ContrastTrace& trace, double r_star, double g_psl_db,
                              double margin_db, double t_obs_seconds,
                              std::int64_t window_begin, int exclusion_bits);

} // namespace zeddet

#endif
