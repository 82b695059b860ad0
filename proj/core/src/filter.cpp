#include "zeddet/filter.hpp"

#include "zeddet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace zeddet {

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz) {
  if (order < 1) throw ConfigError("lowpass: order must be >= 1");
  if (sample_rate_hz <= 0.0) throw ConfigError("lowpass: sample rate must be > 0");
  if (cutoff_hz <= 0.0 || cutoff_hz >= sample_rate_hz / 2.0)
    throw ConfigError("lowpass: cutoff must lie in (0, sample_rate/2)");

  // prewarped analog cutoff; bilinear transform s -> 2fs (1-z^-1)/(1+z^-1)
  const double fs2 = 2.0 * sample_rate_hz;
  const double wa = fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

  std::vector<Biquad> sos;
  sos.reserve(static_cast<std::size_t>((order + 1) / 2));

  // complex pole pairs of the analog prototype, scaled to wa
  for (int k = 0; k < order / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order);
    const std::complex<double> p = wa * std::complex<double>(-std::sin(theta), std::cos(theta));
    const std::complex<double> q = (fs2 + p) / (fs2 - p);  // z-domain pole
    Biquad s;
    s.a1 = -2.0 * q.real();
    s.a2 = std::norm(q);
    // both zeros at z = -1; scale so DC gain is exactly 1 (division by 4 is exact)
    const double g = (1.0 + s.a1 + s.a2) / 4.0;
    s.b0 = g;
    s.b1 = 2.0 * g;
    s.b2 = g;
    sos.push_back(s);
  }
  if (order % 2) {
    const double q = (fs2 - wa) / (fs2 + wa);  // real pole
    Biquad s;
    s.a1 = -q;
    s.a2 = 0.0;
    const double g = (1.0 - q) / 2.0;
    s.b0 = g;
    s.b1 = g;
    s.b2 = 0.0;
    sos.push_back(s);
  }
  return sos;
}

double sos_magnitude(const std::vector<Biquad>& sos, double freq_hz, double sample_rate_hz) {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  double mag = 1.0;
  for (const auto& s : sos) {
    const std::complex<double> num = s.b0 + s.b1 * z1 + s.b2 * z2;
    const std::complex<double> den = 1.0 + s.a1 * z1 + s.a2 * z2;
    mag *= std::abs(num) / std::abs(den);
  }
  return mag;
}

namespace {

// direct-form II transposed, with initial state scaled to the first sample so
// steady-state inputs see no transient
void run_section(const Biquad& s, std::vector<double>& x) {
  const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  double z1 = (dc - s.b0) * x[0];
  double z2 = (s.b2 - s.a2 * dc) * x[0];
  for (double& v : x) {
    const double in = v;
    const double out = s.b0 * in + z1;
    z1 = s.b1 * in - s.a1 * out + z2;
    z2 = s.b2 * in - s.a2 * out;
    v = out;
  }
}

void run_cascade(const std::vector<Biquad>& sos, std::vector<double>& x) {
  for (const auto& s : sos) run_section(s, x);
}

} // namespace

std::vector<double> filtfilt(const std::vector<Biquad>& sos, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (n == 1) return {x[0]};

  std::size_t padlen = std::max<std::size_t>(24, 6 * sos.size() * 3);
  padlen = std::min(padlen, n - 1);

  // odd reflection on both ends
  std::vector<double> ext;
  ext.reserve(n + 2 * padlen);
  for (std::size_t i = 0; i < padlen; ++i) ext.push_back(2.0 * x[0] - x[padlen - i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 0; i < padlen; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 2 - i]);

  run_cascade(sos, ext);
  std::reverse(ext.begin(), ext.end());
  run_cascade(sos, ext);
  std::reverse(ext.begin(), ext.end());

  return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(padlen),
                             ext.begin() + static_cast<std::ptrdiff_t>(padlen + n));
}

std::vector<double> lowpass(std::span<const double> x, double cutoff_hz, int order,
                            double sample_rate_hz) {
  return filtfilt(butterworth_lowpass(order, cutoff_hz, sample_rate_hz), x);
}

std::vector<std::complex<double>> lowpass(std::span<const std::complex<double>> x,
                                          double cutoff_hz, int order,
                                          double sample_rate_hz) {
  const auto sos = butterworth_lowpass(order, cutoff_hz, sample_rate_hz);
  std::vector<double> re(x.size()), im(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  const auto fre = filtfilt(sos, re);
  const auto fim = filtfilt(sos, im);
  std::vector<std::complex<double>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = {fre[i], fim[i]};
  return out;
}

} // namespace zeddet
