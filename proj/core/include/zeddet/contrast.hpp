#ifndef ZEDDET_CONTRAST_HPP
#define ZEDDET_CONTRAST_HPP

#include "zeddet/correlator.hpp"
#include "zeddet/sequences.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace zeddet {

/// Sampling-imbalance correction epsilon = sigma^2 (1/a_i + 1/b_i - 1/a_j - 1/b_j).
/// Cancels under balanced sampling.
double epsilon_correction(double sigma2, int a_i, int b_i, int a_j, int b_j);

/// Unbiased path-power estimate eta~ = |e_i|^2 - |e_j|^2 - epsilon for one
/// bit window, i the transmitted-bit hypothesis.
double path_power_estimate(cplx e_i, cplx e_j, int a_i, int b_i, int a_j, int b_j,
                           double sigma2);

/// Combiner weight lambda(n) = (1/N_b)(1/a0 + 1/b0 + 1/a1 + 1/b1);
/// >= 4/(L*N_b), equal to 8/(L*N_b) at balanced sampling.
double lambda_weight(const CorrelatorCounts& c, std::size_t code_len);

/// Code-matched contrast for one subcarrier:
///   R(n) = (1/N_b) sum_m (2 b_m - 1) (|e1(n+m*dt)|^2 - |e0(n+m*dt)|^2 - eps1(n+m*dt))
/// which equals |e_{b_m}|^2 - |e_{1-b_m}|^2 - eps_{b_m} summed over the code,
/// so a synchronized noise-free tag yields R(n0) = eta^2 exactly.
std::vector<double> contrast_row(std::span<const cplx> e0, std::span<const cplx> e1,
                                 std::span<const CorrelatorCounts> counts,
                                 const BitSequence& code, int delta_t, double sigma2);

/// Multi-frequency combiner: R_M(n) = (1/K) sum_k R(n,k)/lambda(n,k).
/// All weights must be > 0.
std::vector<double> combine_subcarriers(std::span<const std::span<const double>> r_rows,
                                        std::span<const std::span<const double>> lambda_rows);

/// Combined contrast trace for a capture.
struct ContrastTrace {
  std::int64_t n_count = 0;
  int subcarriers = 0;
  int delta_t = 0;            // bit stride in RS-sample indices (T_b / RS spacing)
  double stride_seconds = 0.0;
  std::vector<double> lambda;  // per n (window timing shared across subcarriers)
  std::vector<double> r_m;     // combined contrast
  std::vector<double> r;       // per-subcarrier [k * n_count + n]; optional

  double time_of(std::int64_t n) const { return static_cast<double>(n) * stride_seconds; }
};

/// Contrast over a materialized correlator trace (shared-count fast path).
ContrastTrace build_contrast(const CorrelatorTrace& trace, const BitSequence& code,
                             double sigma2, bool keep_per_subcarrier = false);

} // namespace zeddet

#endif
