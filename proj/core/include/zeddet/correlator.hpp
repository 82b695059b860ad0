#ifndef ZEDDET_CORRELATOR_HPP
#define ZEDDET_CORRELATOR_HPP

#include "zeddet/channel.hpp"
#include "zeddet/sequences.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace zeddet {

/// One received RS sample with its grid time.
struct RsSample {
  double t = 0.0;
  cplx y{0.0, 0.0};
};

struct CorrelatorCounts {
  int a0 = 0, b0 = 0;  // samples with g0 = +1 / -1 in the window
  int a1 = 0, b1 = 0;
};

struct CorrelatorWindow {
  cplx e0{0.0, 0.0};
  cplx e1{0.0, 0.0};
  CorrelatorCounts counts;
};

/// Dual correlator over one bit interval [window_start, window_start + T_b).
/// The reference square waves run in absolute receiver time (phase 0 at t=0),
/// so a constant component of y cancels exactly for any sampling pattern:
///   e_i = sum_{+} y/a_i - sum_{-} y/b_i.
/// Samples outside the window are ignored; irregular sampling is expressed by
/// the sample set itself. Throws DegenerateWindow if any of a_i, b_i is zero.
CorrelatorWindow correlate(std::span<const RsSample> samples, const FskParams& fsk,
                           double window_start);

/// Per-component noise variance of a correlator output, Eq.-(5)-style:
/// (sigma^2/2) * (1/a + 1/b). a, b >= 1 required.
double correlator_noise_var(double sigma2, int a, int b);

/// Shared window geometry and reference-sign masks for a whole capture.
/// Bit windows start at every RS index n and span samples_per_bit samples.
class TraceBuilder {
public:
  TraceBuilder(const GridParams& grid, const FskParams& fsk, std::int64_t rs_count);

  int samples_per_bit() const { return samples_per_bit_; }
  std::int64_t rs_count() const { return rs_count_; }
  /// Number of bit-window positions (windows fully inside the capture).
  std::int64_t window_count() const { return rs_count_ - samples_per_bit_ + 1; }
  double stride_seconds() const { return stride_seconds_; }

  CorrelatorCounts counts_at(std::int64_t n) const;

  /// e0(n), e1(n) for every window position, from one subcarrier row.
  /// Sliding-sum implementation; matches correlate() to floating precision.
  void correlate_row(std::span<const cplx> y, std::span<cplx> e0, std::span<cplx> e1) const;

  /// Same, but only at the given window positions (no dense trace).
  void correlate_at(std::span<const cplx> y, std::span<const std::int64_t> positions,
                    std::span<cplx> e0, std::span<cplx> e1) const;

private:
  std::int64_t rs_count_ = 0;
  int samples_per_bit_ = 0;
  double stride_seconds_ = 0.0;
  std::vector<std::uint8_t> pos0_, pos1_;   // g_i(t_l) == +1
  std::vector<std::int64_t> prefix0_, prefix1_;  // counts of +1 up to l
};

/// Materialized correlator traces for a capture: e_i(n,k) for every window
/// position n and subcarrier k, with counts shared across subcarriers.
struct CorrelatorTrace {
  int subcarriers = 0;
  std::int64_t n_count = 0;
  int samples_per_bit = 0;
  double stride_seconds = 0.0;
  std::vector<cplx> e0, e1;              // [k * n_count + n]
  std::vector<CorrelatorCounts> counts;  // per n

  cplx e(int tone, int k, std::int64_t n) const {
    const auto idx = static_cast<std::size_t>(k) * static_cast<std::size_t>(n_count) +
                     static_cast<std::size_t>(n);
    return tone == 0 ? e0[idx] : e1[idx];
  }
};

CorrelatorTrace build_correlator_trace(const ResourceGrid& grid, const FskParams& fsk);

} // namespace zeddet

#endif
