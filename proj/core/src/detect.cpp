#include "zeddet/detect.hpp"

#include "zeddet/errors.hpp"
#include "zeddet/filter.hpp"
#include "zeddet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace zeddet {

double peak_db(double contrast_value) {
  if (contrast_value <= 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(contrast_value);
}

std::optional<Peak> detect_primary(std::span<const double> r_m, double r_star,
                                   std::int64_t begin, std::int64_t end) {
  begin = std::max<std::int64_t>(begin, 0);
  end = std::min<std::int64_t>(end, static_cast<std::int64_t>(r_m.size()));
  if (begin >= end) return std::nullopt;
  std::int64_t best = begin;
  for (std::int64_t i = begin + 1; i < end; ++i) {
    if (r_m[static_cast<std::size_t>(i)] > r_m[static_cast<std::size_t>(best)]) best = i;
  }
  const double v = r_m[static_cast<std::size_t>(best)];
  if (!(v > r_star)) return std::nullopt;
  return Peak{best, v, peak_db(v)};
}

double secondary_threshold_db(double p0_db, double g_psl_db, double margin_db) {
  return p0_db - g_psl_db + margin_db;
}

std::optional<Peak> detect_secondary(std::span<const double> r_m, const Peak& primary,
                                     double r_star, double s_db,
                                     std::int64_t search_half_width,
                                     std::int64_t exclusion_half_width) {
  const std::int64_t n = static_cast<std::int64_t>(r_m.size());
  const std::int64_t lo = std::max<std::int64_t>(0, primary.index - search_half_width);
  const std::int64_t hi = std::min(n, primary.index + search_half_width + 1);
  std::int64_t best = -1;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = lo; i < hi; ++i) {
    if (std::llabs(i - primary.index) <= exclusion_half_width) continue;
    const double v = r_m[static_cast<std::size_t>(i)];
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best < 0) return std::nullopt;
  const double s_linear = std::pow(10.0, s_db / 20.0);
  if (!(best_v > r_star) || !(best_v > s_linear)) return std::nullopt;
  return Peak{best, best_v, peak_db(best_v)};
}

ContrastTrace run_pipeline(const GridSynthesizer& synth, const BitSequence& code,
                           const FskParams& fsk, double sigma2, const DetectorConfig& cfg) {
  const TraceBuilder tb(synth.grid(), fsk, synth.rs_count());
  const int K = synth.grid().subcarriers();
  const std::int64_t n_e = tb.window_count();
  const std::int64_t span = static_cast<std::int64_t>(code.size() - 1) * tb.samples_per_bit();
  const std::int64_t n_c = n_e - span;
  if (n_c < 1) throw ConfigError("pipeline: capture shorter than one code span");
  const double rs_rate = 1.0 / tb.stride_seconds();
  if (cfg.lowpass_enabled && cfg.lowpass_cutoff_hz >= rs_rate / 2.0)
    throw ConfigError("detector: lowpass cutoff must be below the RS Nyquist rate");

  ContrastTrace out;
  out.subcarriers = K;
  out.n_count = n_c;
  out.delta_t = tb.samples_per_bit();
  out.stride_seconds = tb.stride_seconds();
  out.lambda.resize(static_cast<std::size_t>(n_c));
  std::vector<CorrelatorCounts> counts(static_cast<std::size_t>(n_e));
  for (std::int64_t n = 0; n < n_e; ++n) counts[static_cast<std::size_t>(n)] = tb.counts_at(n);
  for (std::int64_t n = 0; n < n_c; ++n)
    out.lambda[static_cast<std::size_t>(n)] =
        lambda_weight(counts[static_cast<std::size_t>(n)], code.size());
  if (cfg.keep_per_subcarrier)
    out.r.resize(static_cast<std::size_t>(K) * static_cast<std::size_t>(n_c));

  // one weighted per-subcarrier contrast per slot, reduced in k order below
  std::vector<std::vector<double>> weighted(static_cast<std::size_t>(K));
  parallel_for(static_cast<std::size_t>(K), cfg.workers, [&](std::size_t k) {
    std::vector<cplx> row(static_cast<std::size_t>(synth.rs_count()));
    synth.row(static_cast<int>(k), row);
    std::vector<cplx> e0(static_cast<std::size_t>(n_e)), e1(static_cast<std::size_t>(n_e));
    tb.correlate_row(row, e0, e1);
    if (cfg.lowpass_enabled) {
      e0 = lowpass(std::span<const cplx>(e0), cfg.lowpass_cutoff_hz, cfg.lowpass_order, rs_rate);
      e1 = lowpass(std::span<const cplx>(e1), cfg.lowpass_cutoff_hz, cfg.lowpass_order, rs_rate);
    }
    auto r_k = contrast_row(e0, e1, counts, code, out.delta_t, sigma2);
    if (cfg.keep_per_subcarrier) {
      std::copy(r_k.begin(), r_k.end(),
                out.r.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(n_c)));
    }
    for (std::int64_t n = 0; n < n_c; ++n)
      r_k[static_cast<std::size_t>(n)] /= out.lambda[static_cast<std::size_t>(n)];
    weighted[k] = std::move(r_k);
  });

  out.r_m.assign(static_cast<std::size_t>(n_c), 0.0);
  for (int k = 0; k < K; ++k) {
    const auto& w = weighted[static_cast<std::size_t>(k)];
    for (std::int64_t n = 0; n < n_c; ++n)
      out.r_m[static_cast<std::size_t>(n)] += w[static_cast<std::size_t>(n)];
  }
  const double inv_k = 1.0 / static_cast<double>(K);
  for (double& v : out.r_m) v *= inv_k;
  return out;
}

DetectionReport detect_window(const ContrastTrace& trace, double r_star, double g_psl_db,
                              double margin_db, double t_obs_seconds,
                              std::int64_t window_begin, int exclusion_bits) {
  DetectionReport rep;
  rep.r_star = r_star;
  rep.g_psl_db = g_psl_db;
  rep.margin_db = margin_db;
  rep.stride_seconds = trace.stride_seconds;
  const auto obs = static_cast<std::int64_t>(std::llround(t_obs_seconds / trace.stride_seconds));
  rep.primary = detect_primary(trace.r_m, r_star, window_begin, window_begin + obs);
  if (!rep.primary) return rep;
  rep.s_db = secondary_threshold_db(rep.primary->level_db, g_psl_db, margin_db);
  rep.secondary = detect_secondary(trace.r_m, *rep.primary, r_star, rep.s_db, obs / 2,
                                   static_cast<std::int64_t>(exclusion_bits) * trace.delta_t);
  return rep;
}

std::string DetectionReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << "r_star " << r_star << "\n";
  if (primary) {
    os << "primary index " << primary->index << " t_seconds "
       << static_cast<double>(primary->index) * stride_seconds << " value " << primary->value
       << " level_db " << primary->level_db << "\n";
    os << "secondary_threshold_db " << s_db << " (g_psl_db " << g_psl_db << ", margin_db "
       << margin_db << ")\n";
    if (secondary) {
      os << "secondary index " << secondary->index << " t_seconds "
         << static_cast<double>(secondary->index) * stride_seconds << " value "
         << secondary->value << " level_db " << secondary->level_db << "\n";
    } else {
      os << "secondary none\n";
    }
  } else {
    os << "primary none\n";
  }
  return os.str();
}

} // namespace zeddet
