#ifndef ZEDDET_FILTER_HPP
#define ZEDDET_FILTER_HPP

#include <complex>
#include <span>
#include <vector>

namespace zeddet {

/// One direct-form-II-transposed second-order section.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;  // denominator, a0 normalized to 1
};

/// Butterworth low-pass as a cascade of second-order sections (bilinear
/// transform, DC gain normalized to exactly 1 per section).
/// Throws if cutoff >= sample_rate/2.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz);

/// |H(f)| of the cascade (analog-prototype magnitude mapped through the
/// bilinear transform), handy as a test oracle.
double sos_magnitude(const std::vector<Biquad>& sos, double freq_hz, double sample_rate_hz);

/// Zero-phase (forward-backward) filtering with odd-reflection padding and
/// steady-state initial conditions, so constants pass through exactly and
/// peaks are not delayed.
std::vector<double> filtfilt(const std::vector<Biquad>& sos, std::span<const double> x);

/// Convenience: design + filtfilt. Real and imaginary parts of complex
/// streams are filtered independently.
std::vector<double> lowpass(std::span<const double> x, double cutoff_hz, int order,
                            double sample_rate_hz);
std::vector<std::complex<double>> lowpass(std::span<const std::complex<double>> x,
                                          double cutoff_hz, int order,
                                          double sample_rate_hz);

} // namespace zeddet

#endif
