#ifndef ZEDDET_STATS_HPP
#define ZEDDET_STATS_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace zeddet {

struct MomentSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;        // unbiased (n-1)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

/// Streaming accumulator for mean/variance/skewness/kurtosis.
class MomentAccumulator {
public:
  void add(double x) {
    // Welford-style central moment updates.
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ -
           4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
  }

  MomentSummary summary() const {
    MomentSummary s;
    s.count = n_;
    s.mean = mean_;
    if (n_ > 1) s.variance = m2_ / static_cast<double>(n_ - 1);
    if (n_ > 2 && m2_ > 0.0) {
      const double n = static_cast<double>(n_);
      s.skewness = std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
      s.excess_kurtosis = n * m4_ / (m2_ * m2_) - 3.0;
    }
    return s;
  }

private:
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

inline MomentSummary moments(std::span<const double> xs) {
  MomentAccumulator acc;
  for (double x : xs) acc.add(x);
  return acc.summary();
}

} // namespace zeddet

#endif
