#include "zeddet/correlator.hpp"

#include "zeddet/errors.hpp"

#include <cmath>

namespace zeddet {

CorrelatorWindow correlate(std::span<const RsSample> samples, const FskParams& fsk,
                           double window_start) {
  const double t_end = window_start + fsk.bit_seconds;
  const double p0 = 1.0 / fsk.f0_hz;
  const double p1 = 1.0 / fsk.f1_hz;

  cplx sum_pos0{}, sum_neg0{}, sum_pos1{}, sum_neg1{};
  CorrelatorCounts c;
  for (const auto& s : samples) {
    if (s.t < window_start || s.t >= t_end) continue;
    if (square_wave_sign(s.t, p0) > 0) {
      sum_pos0 += s.y;
      ++c.a0;
    } else {
      sum_neg0 += s.y;
      ++c.b0;
    }
    if (square_wave_sign(s.t, p1) > 0) {
      sum_pos1 += s.y;
      ++c.a1;
    } else {
      sum_neg1 += s.y;
      ++c.b1;
    }
  }
  if (c.a0 == 0 || c.b0 == 0 || c.a1 == 0 || c.b1 == 0)
    throw DegenerateWindow("correlate: empty sample class in bit window (a0=" +
                           std::to_string(c.a0) + " b0=" + std::to_string(c.b0) +
                           " a1=" + std::to_string(c.a1) + " b1=" + std::to_string(c.b1) + ")");
  CorrelatorWindow w;
  w.counts = c;
  w.e0 = sum_pos0 / static_cast<double>(c.a0) - sum_neg0 / static_cast<double>(c.b0);
  w.e1 = sum_pos1 / static_cast<double>(c.a1) - sum_neg1 / static_cast<double>(c.b1);
  return w;
}

double correlator_noise_var(double sigma2, int a, int b) {
  if (a < 1 || b < 1) throw ConfigError("correlator_noise_var: counts must be >= 1");
  return 0.5 * sigma2 * (1.0 / a + 1.0 / b);
}

TraceBuilder::TraceBuilder(const GridParams& grid, const FskParams& fsk,
                           std::int64_t rs_count)
    : rs_count_(rs_count) {
  if (rs_count < 2) throw ConfigError("trace: capture too short");
  stride_seconds_ = rs_spacing(grid);

  // samples per bit window; the first window is the reference
  const double t_b = fsk.bit_seconds;
  std::int64_t l = 0;
  while (l < rs_count && rs_time(grid, l) < t_b) ++l;
  samples_per_bit_ = static_cast<int>(l);
  if (samples_per_bit_ < 2)
    throw ConfigError("trace: fewer than 2 RS samples per bit interval");
  if (rs_count_ < samples_per_bit_)
    throw ConfigError("trace: capture shorter than one bit interval");

  const double p0 = 1.0 / fsk.f0_hz;
  const double p1 = 1.0 / fsk.f1_hz;
  pos0_.resize(static_cast<std::size_t>(rs_count_));
  pos1_.resize(static_cast<std::size_t>(rs_count_));
  prefix0_.assign(static_cast<std::size_t>(rs_count_) + 1, 0);
  prefix1_.assign(static_cast<std::size_t>(rs_count_) + 1, 0);
  for (std::int64_t i = 0; i < rs_count_; ++i) {
    const double t = rs_time(grid, i);
    pos0_[static_cast<std::size_t>(i)] = square_wave_sign(t, p0) > 0 ? 1 : 0;
    pos1_[static_cast<std::size_t>(i)] = square_wave_sign(t, p1) > 0 ? 1 : 0;
    prefix0_[static_cast<std::size_t>(i) + 1] =
        prefix0_[static_cast<std::size_t>(i)] + pos0_[static_cast<std::size_t>(i)];
    prefix1_[static_cast<std::size_t>(i) + 1] =
        prefix1_[static_cast<std::size_t>(i)] + pos1_[static_cast<std::size_t>(i)];
  }
}

CorrelatorCounts TraceBuilder::counts_at(std::int64_t n) const {
  CorrelatorCounts c;
  const auto lo = static_cast<std::size_t>(n);
  const auto hi = static_cast<std::size_t>(n + samples_per_bit_);
  c.a0 = static_cast<int>(prefix0_[hi] - prefix0_[lo]);
  c.b0 = samples_per_bit_ - c.a0;
  c.a1 = static_cast<int>(prefix1_[hi] - prefix1_[lo]);
  c.b1 = samples_per_bit_ - c.a1;
  return c;
}

void TraceBuilder::correlate_row(std::span<const cplx> y, std::span<cplx> e0,
                                 std::span<cplx> e1) const {
  const std::int64_t n_out = window_count();
  if (y.size() < static_cast<std::size_t>(rs_count_) ||
      e0.size() < static_cast<std::size_t>(n_out) || e1.size() < static_cast<std::size_t>(n_out))
    throw ConfigError("correlate_row: buffer size mismatch");

  // running prefix sums of y, masked y(g0=+1) and masked y(g1=+1);
  // a window's class sums come out as prefix differences
  const std::size_t n_samp = static_cast<std::size_t>(rs_count_);
  std::vector<cplx> p_all(n_samp + 1), p_pos0(n_samp + 1), p_pos1(n_samp + 1);
  cplx acc_all{}, acc0{}, acc1{};
  for (std::size_t i = 0; i < n_samp; ++i) {
    acc_all += y[i];
    if (pos0_[i]) acc0 += y[i];
    if (pos1_[i]) acc1 += y[i];
    p_all[i + 1] = acc_all;
    p_pos0[i + 1] = acc0;
    p_pos1[i + 1] = acc1;
  }

  const auto L = static_cast<std::size_t>(samples_per_bit_);
  for (std::int64_t n = 0; n < n_out; ++n) {
    const auto lo = static_cast<std::size_t>(n);
    const auto hi = lo + L;
    const cplx all = p_all[hi] - p_all[lo];
    const cplx s0 = p_pos0[hi] - p_pos0[lo];
    const cplx s1 = p_pos1[hi] - p_pos1[lo];
    const auto a0 = static_cast<double>(prefix0_[hi] - prefix0_[lo]);
    const auto a1 = static_cast<double>(prefix1_[hi] - prefix1_[lo]);
    const double b0 = static_cast<double>(samples_per_bit_) - a0;
    const double b1 = static_cast<double>(samples_per_bit_) - a1;
    if (a0 == 0.0 || b0 == 0.0 || a1 == 0.0 || b1 == 0.0)
      throw DegenerateWindow("correlate_row: empty sample class at window " + std::to_string(n));
    e0[static_cast<std::size_t>(n)] = s0 / a0 - (all - s0) / b0;
    e1[static_cast<std::size_t>(n)] = s1 / a1 - (all - s1) / b1;
  }
}

void TraceBuilder::correlate_at(std::span<const cplx> y,
                                std::span<const std::int64_t> positions, std::span<cplx> e0,
                                std::span<cplx> e1) const {
  if (e0.size() < positions.size() || e1.size() < positions.size())
    throw ConfigError("correlate_at: buffer size mismatch");
  const auto L = static_cast<std::size_t>(samples_per_bit_);
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const std::int64_t n = positions[p];
    if (n < 0 || n > rs_count_ - samples_per_bit_)
      throw ConfigError("correlate_at: window position out of range");
    cplx sum_pos0{}, sum_neg0{}, sum_pos1{}, sum_neg1{};
    const auto lo = static_cast<std::size_t>(n);
    for (std::size_t i = lo; i < lo + L; ++i) {
      if (pos0_[i])
        sum_pos0 += y[i];
      else
        sum_neg0 += y[i];
      if (pos1_[i])
        sum_pos1 += y[i];
      else
        sum_neg1 += y[i];
    }
    const auto c = counts_at(n);
    if (c.a0 == 0 || c.b0 == 0 || c.a1 == 0 || c.b1 == 0)
      throw DegenerateWindow("correlate_at: empty sample class at window " + std::to_string(n));
    e0[p] = sum_pos0 / static_cast<double>(c.a0) - sum_neg0 / static_cast<double>(c.b0);
    e1[p] = sum_pos1 / static_cast<double>(c.a1) - sum_neg1 / static_cast<double>(c.b1);
  }
}

CorrelatorTrace build_correlator_trace(const ResourceGrid& grid, const FskParams& fsk) {
  TraceBuilder tb(grid.params, fsk, grid.rs_count);
  CorrelatorTrace tr;
  tr.subcarriers = grid.params.subcarriers();
  tr.n_count = tb.window_count();
  tr.samples_per_bit = tb.samples_per_bit();
  tr.stride_seconds = tb.stride_seconds();
  tr.counts.resize(static_cast<std::size_t>(tr.n_count));
  for (std::int64_t n = 0; n < tr.n_count; ++n)
    tr.counts[static_cast<std::size_t>(n)] = tb.counts_at(n);
  tr.e0.resize(static_cast<std::size_t>(tr.subcarriers) * static_cast<std::size_t>(tr.n_count));
  tr.e1.resize(tr.e0.size());
  for (int k = 0; k < tr.subcarriers; ++k) {
    std::span<const cplx> row(grid.samples.data() + static_cast<std::size_t>(k) *
                                                        static_cast<std::size_t>(grid.rs_count),
                              static_cast<std::size_t>(grid.rs_count));
    const auto off = static_cast<std::size_t>(k) * static_cast<std::size_t>(tr.n_count);
    tb.correlate_row(row, {tr.e0.data() + off, static_cast<std::size_t>(tr.n_count)},
                     {tr.e1.data() + off, static_cast<std::size_t>(tr.n_count)});
  }
  return tr;
}

} // namespace zeddet
