#include "zeddet/harness.hpp"

#include "zeddet/errors.hpp"
#include "zeddet/np.hpp"
#include "zeddet/parallel.hpp"
#include "zeddet/rng.hpp"
#include "zeddet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace zeddet {

namespace {

constexpr std::uint64_t kChannelStream = 0xC4A0;
constexpr std::uint64_t kOffsetStream = 0x0FF0;
constexpr std::uint64_t kCalibStream = 0xCA11;

const BitSequence& search_code(const TrialSpec& spec) {
  if (spec.rx_code.size() > 0) return spec.rx_code;
  if (!spec.tags.empty()) return spec.tags.front().code;
  throw ConfigError("spec: a search code is required (detector code or at least one tag)");
}

const FskParams& search_fsk(const TrialSpec& spec) {
  if (spec.rx_fsk.f0_hz > 0.0) return spec.rx_fsk;
  if (!spec.tags.empty()) return spec.tags.front().fsk;
  throw ConfigError("spec: FSK parameters are required");
}

ChannelCoeffs realize_channel(const TrialSpec& spec, Rng& rng) {
  ChannelCoeffs c;
  if (spec.gamma_random_phase) {
    c.gamma.resize(static_cast<std::size_t>(spec.grid.subcarriers()));
    for (auto& g : c.gamma)
      g = std::polar(spec.gamma_amp,
                     spec.gamma_phase_rad + 2.0 * std::numbers::pi * rng.uniform());
  } else {
    c.gamma = {std::polar(spec.gamma_amp, spec.gamma_phase_rad)};
  }
  return c;
}

ZedConfig realize_tag(const TagSpec& t, const GridParams& grid, Rng& rng) {
  ZedConfig z;
  z.code = t.code;
  z.fsk = t.fsk;
  z.t_seq_seconds = t.t_seq_seconds;
  z.t_wait_seconds = t.t_wait_seconds;
  z.start_offset_seconds = t.start_offset_seconds;
  if (t.reflect_random_phase) {
    z.reflect.resize(static_cast<std::size_t>(grid.subcarriers()));
    for (auto& r : z.reflect)
      r = std::polar(t.reflect_amp,
                     t.reflect_phase_rad + 2.0 * std::numbers::pi * rng.uniform());
  } else {
    z.reflect = {std::polar(t.reflect_amp, t.reflect_phase_rad)};
  }
  return z;
}

double offset_quantum(const TagSpec& t) {
  return t.offset_quantum_seconds > 0.0 ? t.offset_quantum_seconds : 1.0 / (2.0 * t.fsk.f0_hz);
}

double draw_offset(const TagSpec& t, Rng& rng) {
  const double q = offset_quantum(t);
  const auto slots = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::floor(t.cycle_seconds() / q)));
  return static_cast<double>(rng.next_u64() % slots) * q;
}

/// Contrast indices of the tag's sequence starts inside [0, n_count).
std::vector<std::int64_t> sequence_start_indices(const ZedConfig& tag, double stride_seconds,
                                                 std::int64_t n_count) {
  std::vector<std::int64_t> out;
  const double cycle = tag.cycle_seconds();
  double t = tag.start_offset_seconds + tag.t_wait_seconds;
  while (t - cycle >= -1e-12) t -= cycle;  // earliest start at or after t >= 0 comes next
  for (; ; t += cycle) {
    if (t < -1e-12) continue;
    const auto n = static_cast<std::int64_t>(std::llround(t / stride_seconds));
    if (n >= n_count) break;
    if (n >= 0) out.push_back(n);
  }
  return out;
}

struct H0Geometry {
  std::int64_t span = 0;  // RS samples per code footprint (one window)
  double window_seconds = 0.0;
};

H0Geometry h0_geometry(const TrialSpec& spec) {
  const auto& fsk = search_fsk(spec);
  const auto& code = search_code(spec);
  const double t_b = fsk.bit_seconds;
  const double stride = rs_spacing(spec.grid);
  const auto samples_per_bit = static_cast<std::int64_t>(std::llround(t_b / stride));
  H0Geometry g;
  g.span = samples_per_bit * static_cast<std::int64_t>(code.size());
  g.window_seconds = static_cast<double>(g.span) * stride;
  return g;
}

/// Evaluates R_M over `n_windows` independent (non-overlapping) windows of
/// zero-tag captures, chunk by chunk, and streams the values in a
/// deterministic order.
template <typename Sink>
void h0_window_values(const TrialSpec& spec, std::int64_t n_windows, Sink&& sink) {
  if (!spec.tags.empty()) throw ConfigError("calibrate_h0: scenario must have zero tags");
  const auto& code = search_code(spec);
  const auto& fsk = search_fsk(spec);
  const auto geom = h0_geometry(spec);
  const std::int64_t windows_per_chunk = std::max<std::int64_t>(
      1, std::min<std::int64_t>(64, (1 << 18) / std::max<std::int64_t>(1, geom.span)));
  const std::int64_t n_chunks = (n_windows + windows_per_chunk - 1) / windows_per_chunk;

  Rng chan_rng(Rng::derive(spec.seed_base, kChannelStream));
  const ChannelCoeffs chans = realize_channel(spec, chan_rng);

  std::vector<std::vector<double>> slot(static_cast<std::size_t>(n_chunks));
  parallel_for(static_cast<std::size_t>(n_chunks), spec.detector.workers, [&](std::size_t c) {
    const std::int64_t first = static_cast<std::int64_t>(c) * windows_per_chunk;
    const std::int64_t count = std::min(windows_per_chunk, n_windows - first);
    NoiseModel noise = spec.noise;
    noise.seed = spec.seed_base + static_cast<std::uint64_t>(c);
    const double duration = static_cast<double>(count) * geom.window_seconds;
    GridSynthesizer synth(spec.grid, {}, chans, noise, duration);
    std::vector<double>& values = slot[c];
    values.resize(static_cast<std::size_t>(count));

    if (spec.detector.lowpass_enabled) {
      DetectorConfig cfg = spec.detector;
      cfg.workers = 1;  // chunks already run in parallel
      const auto trace = run_pipeline(synth, code, fsk, spec.noise.sigma2, cfg);
      for (std::int64_t w = 0; w < count; ++w) {
        const std::int64_t n = w * geom.span;
        values[static_cast<std::size_t>(w)] =
            n < trace.n_count ? trace.r_m[static_cast<std::size_t>(n)] : 0.0;
      }
      return;
    }

    // sparse path: correlate only the window positions actually combined
    const TraceBuilder tb(spec.grid, fsk, synth.rs_count());
    const int delta_t = tb.samples_per_bit();
    const std::size_t nb = code.size();
    std::vector<std::int64_t> positions;
    positions.reserve(static_cast<std::size_t>(count) * nb);
    for (std::int64_t w = 0; w < count; ++w)
      for (std::size_t m = 0; m < nb; ++m)
        positions.push_back(w * geom.span + static_cast<std::int64_t>(m) * delta_t);
    std::vector<cplx> row(static_cast<std::size_t>(synth.rs_count()));
    std::vector<cplx> e0(positions.size()), e1(positions.size());
    std::vector<double> acc(static_cast<std::size_t>(count), 0.0);
    const int K = spec.grid.subcarriers();
    for (int k = 0; k < K; ++k) {
      synth.row(k, row);
      tb.correlate_at(row, positions, e0, e1);
      for (std::int64_t w = 0; w < count; ++w) {
        double r = 0.0;
        for (std::size_t m = 0; m < nb; ++m) {
          const std::size_t p = static_cast<std::size_t>(w) * nb + m;
          const auto c4 = tb.counts_at(positions[p]);
          const double eps1 =
              spec.noise.sigma2 * (1.0 / c4.a1 + 1.0 / c4.b1 - 1.0 / c4.a0 - 1.0 / c4.b0);
          const double d = std::norm(e1[p]) - std::norm(e0[p]) - eps1;
          r += code.bit(m) ? d : -d;
        }
        r /= static_cast<double>(nb);
        const double lam = lambda_weight(tb.counts_at(w * geom.span), nb);
        acc[static_cast<std::size_t>(w)] += r / lam;
      }
    }
    for (std::int64_t w = 0; w < count; ++w)
      values[static_cast<std::size_t>(w)] = acc[static_cast<std::size_t>(w)] / K;
  });

  for (const auto& chunk : slot)
    for (double v : chunk) sink(v);
}

} // namespace

double TrialSpec::effective_t_obs() const {
  if (t_obs_seconds > 0.0) return t_obs_seconds;
  if (tags.empty()) throw ConfigError("spec: t_obs is required when no tags are configured");
  double m = tags.front().cycle_seconds();
  for (const auto& t : tags) m = std::min(m, t.cycle_seconds());
  return m;
}

double TrialSpec::effective_capture() const {
  if (capture_seconds > 0.0) return capture_seconds;
  double span = 0.0;
  for (const auto& t : tags) span = std::max(span, t.t_seq_seconds);
  return effective_t_obs() + span;
}

double TrialSpec::effective_g_psl_db() const {
  if (g_psl_db != 0.0) return g_psl_db;
  return psl_db(search_code(*this));
}

void TrialSpec::validate() const {
  grid.validate();
  if (noise.sigma2 < 0.0) throw ConfigError("noise: sigma2 must be >= 0");
  if (p_fa_targets.empty()) throw ConfigError("run: at least one p_fa target is required");
  for (double p : p_fa_targets)
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("run: p_fa targets must lie in (0, 1)");
  if (n_trials < 1) throw ConfigError("run: trials must be >= 1");
  for (const auto& t : tags) {
    if (t.reflect_amp < 0.0) throw ConfigError("tag: reflect_amp must be >= 0");
    const double expected = static_cast<double>(t.code.size()) * t.fsk.bit_seconds;
    if (std::abs(t.t_seq_seconds - expected) > 1e-9)
      throw ConfigError("tag: t_seq must equal N_b * T_b");
    if (t.t_wait_seconds < 0.0) throw ConfigError("tag: cycle must be >= t_seq");
  }
}

H0Calibration calibrate_h0(const TrialSpec& spec, std::int64_t n_windows) {
  if (n_windows <= 0) n_windows = spec.n_trials;
  MomentAccumulator acc;
  h0_window_values(spec, n_windows, [&](double v) { acc.add(v); });
  const auto m = acc.summary();
  H0Calibration cal;
  cal.n_windows = static_cast<std::int64_t>(m.count);
  cal.mean = m.mean;
  cal.var_hat = m.variance;
  cal.skewness = m.skewness;
  cal.excess_kurtosis = m.excess_kurtosis;
  cal.insufficient = cal.n_windows < 1000;
  return cal;
}

double analytic_h0_variance(double sigma2, const CorrelatorCounts& counts,
                            std::size_t code_len, int subcarriers) {
  if (subcarriers < 1) throw ConfigError("analytic_h0_variance: need >= 1 subcarrier");
  const double v0 = sigma2 * (1.0 / counts.a0 + 1.0 / counts.b0);
  const double v1 = sigma2 * (1.0 / counts.a1 + 1.0 / counts.b1);
  const double var_r = (v0 * v0 + v1 * v1) / static_cast<double>(code_len);
  const double lam = lambda_weight(counts, code_len);
  return var_r / (static_cast<double>(subcarriers) * lam * lam);
}

std::vector<double> h0_exceedance(const TrialSpec& spec, std::span<const double> r_stars,
                                  std::int64_t n_windows) {
  std::vector<std::int64_t> hits(r_stars.size(), 0);
  std::int64_t total = 0;
  h0_window_values(spec, n_windows, [&](double v) {
    ++total;
    for (std::size_t i = 0; i < r_stars.size(); ++i)
      if (v > r_stars[i]) ++hits[i];
  });
  std::vector<double> rates(r_stars.size());
  for (std::size_t i = 0; i < r_stars.size(); ++i)
    rates[i] = static_cast<double>(hits[i]) / static_cast<double>(total);
  return rates;
}

TrialMetrics run_single_tag(const TrialSpec& spec) {
  spec.validate();
  if (spec.tags.size() != 1) throw ConfigError("run_single_tag: exactly one tag required");
  const auto& code = search_code(spec);
  const auto& fsk = search_fsk(spec);

  TrialSpec cal_spec = spec;
  cal_spec.tags.clear();
  cal_spec.rx_code = code;
  cal_spec.rx_fsk = fsk;
  cal_spec.seed_base = Rng::derive(spec.seed_base, kCalibStream);
  const auto cal = calibrate_h0(cal_spec, spec.calibration_windows);

  std::vector<double> r_stars;
  r_stars.reserve(spec.p_fa_targets.size());
  for (double p : spec.p_fa_targets) r_stars.push_back(np_threshold(cal.var_hat, p));

  Rng chan_rng(Rng::derive(spec.seed_base, kChannelStream));
  const ChannelCoeffs chans = realize_channel(spec, chan_rng);
  const ZedConfig tag_base = realize_tag(spec.tags[0], spec.grid, chan_rng);

  const double t_obs = spec.effective_t_obs();
  const double capture = std::max(spec.effective_capture(),
                                  t_obs + spec.tags[0].t_seq_seconds);

  struct Slot {
    std::vector<bool> exceed;
    bool correct = false, declared = false;
    std::int64_t timing_err = 0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(spec.n_trials));

  parallel_for(static_cast<std::size_t>(spec.n_trials), spec.detector.workers,
               [&](std::size_t i) {
    const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(i);
    ZedConfig tag = tag_base;
    if (spec.tags[0].randomize_offset) {
      Rng orng(Rng::derive(seed, kOffsetStream));
      tag.start_offset_seconds = draw_offset(spec.tags[0], orng);
    }
    NoiseModel noise = spec.noise;
    noise.seed = seed;
    GridSynthesizer synth(spec.grid, {tag}, chans, noise, capture);
    DetectorConfig cfg = spec.detector;
    cfg.workers = 1;
    const auto trace = run_pipeline(synth, code, fsk, spec.noise.sigma2, cfg);

    const auto obs =
        std::min<std::int64_t>(trace.n_count,
                               static_cast<std::int64_t>(std::llround(t_obs / trace.stride_seconds)));
    const auto truths = sequence_start_indices(tag, trace.stride_seconds, trace.n_count);
    std::int64_t truth = -1;
    for (auto n : truths)
      if (n < obs) { truth = n; break; }

    Slot& s = slots[i];
    s.exceed.resize(r_stars.size(), false);
    if (truth >= 0) {
      const double v = trace.r_m[static_cast<std::size_t>(truth)];
      for (std::size_t j = 0; j < r_stars.size(); ++j) s.exceed[j] = v > r_stars[j];
    }
    const auto peak = detect_primary(trace.r_m, r_stars[0], 0, obs);
    s.declared = peak.has_value();
    if (peak && truth >= 0 && std::llabs(peak->index - truth) <= 1) {
      s.correct = true;
      s.timing_err = peak->index - truth;
    }
  });

  TrialMetrics m;
  m.trials = spec.n_trials;
  m.windows = spec.n_trials;
  m.var_hat = cal.var_hat;
  std::vector<std::int64_t> exceed_counts(r_stars.size(), 0);
  double abs_err_sum = 0.0;
  for (const auto& s : slots) {
    if (s.correct) {
      ++m.correct_detections;
      abs_err_sum += static_cast<double>(std::llabs(s.timing_err));
      m.max_abs_timing_error_strides =
          std::max<std::int64_t>(m.max_abs_timing_error_strides, std::llabs(s.timing_err));
    } else {
      ++m.missed_detections;
      if (s.declared) ++m.false_alarms;
    }
    for (std::size_t j = 0; j < s.exceed.size(); ++j)
      if (s.exceed[j]) ++exceed_counts[j];
  }
  if (m.correct_detections > 0)
    m.mean_abs_timing_error_strides = abs_err_sum / static_cast<double>(m.correct_detections);
  for (std::size_t j = 0; j < r_stars.size(); ++j)
    m.p_d_obs.emplace_back(spec.p_fa_targets[j],
                           static_cast<double>(exceed_counts[j]) /
                               static_cast<double>(spec.n_trials));
  return m;
}

TwoTagAnalysis analyze_two_tag(const TrialSpec& spec) {
  spec.validate();
  if (spec.tags.size() != 2) throw ConfigError("run_two_tag: exactly two tags required");
  if (spec.tags[0].cycle_seconds() == spec.tags[1].cycle_seconds())
    throw ConfigError("run_two_tag: tags must have distinct cycles");
  const auto& code = search_code(spec);
  const auto& fsk = search_fsk(spec);

  TrialSpec cal_spec = spec;
  cal_spec.tags.clear();
  cal_spec.rx_code = code;
  cal_spec.rx_fsk = fsk;
  cal_spec.seed_base = Rng::derive(spec.seed_base, kCalibStream);
  const auto cal = calibrate_h0(cal_spec, spec.calibration_windows);

  Rng chan_rng(Rng::derive(spec.seed_base, kChannelStream));
  const ChannelCoeffs chans = realize_channel(spec, chan_rng);
  std::vector<ZedConfig> tags;
  for (std::size_t i = 0; i < 2; ++i) {
    ZedConfig z = realize_tag(spec.tags[i], spec.grid, chan_rng);
    if (spec.tags[i].randomize_offset) {
      Rng orng(Rng::derive(spec.seed_base, kOffsetStream + i));
      z.start_offset_seconds = draw_offset(spec.tags[i], orng);
    }
    tags.push_back(std::move(z));
  }

  const double t_obs = spec.effective_t_obs();
  const double capture = spec.effective_capture();
  NoiseModel noise = spec.noise;
  noise.seed = spec.seed_base;
  GridSynthesizer synth(spec.grid, tags, chans, noise, capture);

  TwoTagAnalysis a;
  a.trace = run_pipeline(synth, code, fsk, spec.noise.sigma2, spec.detector);
  a.var_hat = cal.var_hat;
  a.r_star = np_threshold(cal.var_hat, spec.p_fa_targets[0]);
  a.obs_strides = static_cast<std::int64_t>(std::llround(t_obs / a.trace.stride_seconds));
  a.window_count = a.trace.n_count / a.obs_strides;
  const int strong = spec.tags[0].reflect_amp >= spec.tags[1].reflect_amp ? 0 : 1;
  a.truth_strong =
      sequence_start_indices(tags[static_cast<std::size_t>(strong)], a.trace.stride_seconds,
                             a.trace.n_count);
  a.truth_weak =
      sequence_start_indices(tags[static_cast<std::size_t>(1 - strong)], a.trace.stride_seconds,
                             a.trace.n_count);
  return a;
}

std::pair<TrialMetrics, std::vector<TwoTagWindowRow>> classify_two_tag(
    const TrialSpec& spec, const TwoTagAnalysis& a, double margin_db) {
  const double g_psl = spec.effective_g_psl_db();
  const double t_obs = spec.effective_t_obs();
  const std::int64_t exclusion =
      static_cast<std::int64_t>(spec.detector.exclusion_bits) * a.trace.delta_t;

  TrialMetrics m;
  m.trials = a.window_count;
  m.windows = a.window_count;
  m.var_hat = a.var_hat;

  std::vector<double> r_stars;
  for (double p : spec.p_fa_targets) r_stars.push_back(np_threshold(a.var_hat, p));
  std::vector<std::int64_t> exceed_counts(r_stars.size(), 0);
  std::int64_t exceed_windows = 0;

  std::vector<TwoTagWindowRow> rows;
  rows.reserve(static_cast<std::size_t>(a.window_count));
  double abs_err_sum = 0.0;

  auto nearest = [](const std::vector<std::int64_t>& xs, std::int64_t n) -> std::int64_t {
    std::int64_t best = -1, dist = std::numeric_limits<std::int64_t>::max();
    for (auto x : xs) {
      const std::int64_t d = std::llabs(x - n);
      if (d < dist) { dist = d; best = x; }
    }
    return best;
  };

  for (std::int64_t w = 0; w < a.window_count; ++w) {
    const std::int64_t begin = w * a.obs_strides;
    TwoTagWindowRow row;
    row.window = w;

    // truth-aligned exceedance of the strong tag, per p_fa target
    for (auto t : a.truth_strong) {
      if (t >= begin && t < begin + a.obs_strides) {
        ++exceed_windows;
        const double v = a.trace.r_m[static_cast<std::size_t>(t)];
        for (std::size_t j = 0; j < r_stars.size(); ++j)
          if (v > r_stars[j]) ++exceed_counts[j];
        break;
      }
    }

    const auto rep = detect_window(a.trace, a.r_star, g_psl, margin_db, t_obs, begin,
                                   spec.detector.exclusion_bits);
    if (!rep.primary) {
      ++m.missed_detections;
      rows.push_back(row);
      continue;
    }
    row.primary_index = rep.primary->index;
    row.primary_db = rep.primary->level_db;

    const std::int64_t near_strong = nearest(a.truth_strong, rep.primary->index);
    const std::int64_t near_weak = nearest(a.truth_weak, rep.primary->index);
    const bool hit_strong =
        near_strong >= 0 && std::llabs(rep.primary->index - near_strong) <= 1;
    const bool hit_weak = near_weak >= 0 && std::llabs(rep.primary->index - near_weak) <= 1;
    row.truth_strong = near_strong;
    if (hit_strong || hit_weak) {
      ++m.correct_detections;
      row.primary_correct = true;
      const std::int64_t err =
          rep.primary->index - (hit_strong ? near_strong : near_weak);
      abs_err_sum += static_cast<double>(std::llabs(err));
      m.max_abs_timing_error_strides = std::max<std::int64_t>(m.max_abs_timing_error_strides, std::llabs(err));
    } else {
      ++m.missed_detections;
      ++m.false_alarms;
      rows.push_back(row);
      continue;
    }

    // the other tag is the secondary target in this window
    const auto& others = hit_strong ? a.truth_weak : a.truth_strong;
    std::int64_t eligible_truth = -1;
    for (auto t : others) {
      const std::int64_t d = std::llabs(t - rep.primary->index);
      if (d <= a.obs_strides / 2 && d > exclusion) {
        eligible_truth = t;
        break;
      }
    }
    row.truth_weak = eligible_truth;
    if (eligible_truth >= 0) ++m.secondary_eligible;
    if (rep.secondary) {
      row.secondary_index = rep.secondary->index;
      row.secondary_db = rep.secondary->level_db;
      if (eligible_truth >= 0 && std::llabs(rep.secondary->index - eligible_truth) <= 1) {
        ++m.secondary_correct;
        row.secondary_correct = true;
      } else {
        ++m.secondary_false_alarms;
      }
    }
    if (eligible_truth >= 0 && !row.secondary_correct) ++m.secondary_missed;
    rows.push_back(row);
  }

  if (m.correct_detections > 0)
    m.mean_abs_timing_error_strides = abs_err_sum / static_cast<double>(m.correct_detections);
  for (std::size_t j = 0; j < r_stars.size(); ++j)
    m.p_d_obs.emplace_back(spec.p_fa_targets[j],
                           exceed_windows > 0
                               ? static_cast<double>(exceed_counts[j]) /
                                     static_cast<double>(exceed_windows)
                               : 0.0);
  return {m, rows};
}

TrialMetrics run_two_tag(const TrialSpec& spec) {
  const auto a = analyze_two_tag(spec);
  return classify_two_tag(spec, a, spec.margin_db).first;
}

std::vector<MarginSweepRow> margin_sweep(const TrialSpec& spec,
                                         std::span<const double> margins_db) {
  if (margins_db.empty()) throw ConfigError("margin_sweep: margin grid must not be empty");
  const auto a = analyze_two_tag(spec);
  std::vector<MarginSweepRow> rows;
  rows.reserve(margins_db.size());
  for (double mdb : margins_db) {
    const auto m = classify_two_tag(spec, a, mdb).first;
    MarginSweepRow r;
    r.margin_db = mdb;
    r.false_alarms = m.secondary_false_alarms;
    r.missed_detections = m.secondary_missed;
    r.eligible = m.secondary_eligible;
    r.windows = m.windows;
    rows.push_back(r);
  }
  return rows;
}

double amp_scale_for_relative_peak_db(double rel_db) {
  return std::pow(10.0, rel_db / 40.0);
}

std::vector<RocRow> roc_sweep(const TrialSpec& spec, std::span<const double> eta2_grid,
                              std::span<const double> p_fa_grid) {
  spec.validate();
  if (spec.tags.size() != 1) throw ConfigError("roc_sweep: exactly one tag required");
  if (eta2_grid.empty() || p_fa_grid.empty())
    throw ConfigError("roc_sweep: grids must not be empty");
  const auto& code = search_code(spec);
  const auto& fsk = search_fsk(spec);

  TrialSpec cal_spec = spec;
  cal_spec.tags.clear();
  cal_spec.rx_code = code;
  cal_spec.rx_fsk = fsk;
  cal_spec.seed_base = Rng::derive(spec.seed_base, kCalibStream);
  const auto cal = calibrate_h0(cal_spec, spec.calibration_windows);

  Rng chan_rng(Rng::derive(spec.seed_base, kChannelStream));
  const ChannelCoeffs chans = realize_channel(spec, chan_rng);
  ZedConfig tag_base = realize_tag(spec.tags[0], spec.grid, chan_rng);
  // alignment pinned to the grid start: the law check isolates the threshold
  // statistics from chip-phase placement
  tag_base.start_offset_seconds = 0.0;
  const double capture = tag_base.cycle_seconds();
  const auto truth_time = tag_base.t_wait_seconds;

  DetectorConfig cfg = spec.detector;
  cfg.workers = 1;

  // contrast peak per unit amplitude^2, from a noise-free jitter-free run
  double peak_unit = 0.0;
  std::int64_t truth_idx = 0;
  {
    ZedConfig unit = tag_base;
    for (auto& r : unit.reflect) r /= std::abs(r) > 0.0 ? std::abs(r) : 1.0;
    if (spec.tags[0].reflect_amp == 0.0) unit.reflect = {cplx(1.0, 0.0)};
    NoiseModel clean;
    clean.sigma2 = 0.0;
    clean.jitter = PhaseJitter::none;
    clean.seed = 0;
    GridSynthesizer synth(spec.grid, {unit}, chans, clean, capture);
    const auto trace = run_pipeline(synth, code, fsk, 0.0, cfg);
    truth_idx = static_cast<std::int64_t>(std::llround(truth_time / trace.stride_seconds));
    if (truth_idx < 0 || truth_idx >= trace.n_count)
      throw ConfigError("roc_sweep: alignment outside the contrast trace");
    peak_unit = trace.r_m[static_cast<std::size_t>(truth_idx)];
    if (!(peak_unit > 0.0)) throw ConfigError("roc_sweep: degenerate noise-free peak");
  }

  std::vector<double> r_stars;
  for (double p : p_fa_grid) r_stars.push_back(np_threshold(cal.var_hat, p));

  std::vector<RocRow> rows;
  for (std::size_t pi = 0; pi < eta2_grid.size(); ++pi) {
    const double eta2 = eta2_grid[pi];
    if (eta2 < 0.0) throw ConfigError("roc_sweep: eta2 must be >= 0");
    const double amp = std::sqrt(eta2 / peak_unit);
    ZedConfig tag = tag_base;
    if (tag.reflect.size() == 1 && std::abs(tag.reflect[0]) == 0.0)
      tag.reflect = {cplx(1.0, 0.0)};
    for (auto& r : tag.reflect) {
      const double mag = std::abs(r);
      r *= mag > 0.0 ? amp / mag : 0.0;
    }

    std::vector<double> values(static_cast<std::size_t>(spec.n_trials));
    parallel_for(static_cast<std::size_t>(spec.n_trials), spec.detector.workers,
                 [&](std::size_t t) {
      const std::uint64_t seed =
          spec.seed_base + static_cast<std::uint64_t>(pi) *
                               static_cast<std::uint64_t>(spec.n_trials) +
          static_cast<std::uint64_t>(t);
      NoiseModel noise = spec.noise;
      noise.seed = seed;
      GridSynthesizer synth(spec.grid, {tag}, chans, noise, capture);
      const auto trace = run_pipeline(synth, code, fsk, spec.noise.sigma2, cfg);
      values[t] = trace.r_m[static_cast<std::size_t>(truth_idx)];
    });

    for (std::size_t fi = 0; fi < p_fa_grid.size(); ++fi) {
      std::int64_t hits = 0;
      for (double v : values)
        if (v > r_stars[fi]) ++hits;
      RocRow r;
      r.eta2 = eta2;
      r.p_fa = p_fa_grid[fi];
      r.r_star = r_stars[fi];
      r.p_d_predicted = detection_prob(r_stars[fi], cal.var_hat, eta2);
      r.p_d_observed = static_cast<double>(hits) / static_cast<double>(spec.n_trials);
      r.trials = spec.n_trials;
      rows.push_back(r);
    }
  }
  return rows;
}

} // namespace zeddet
