#include "zeddet/sequences.hpp"

#include "zeddet/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace zeddet {

BitSequence::BitSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw ConfigError("BitSequence: sequence must not be empty");
  for (auto b : bits_) {
    if (b > 1) throw ConfigError("BitSequence: elements must be 0 or 1");
  }
}

BitSequence BitSequence::from_string(const std::string& csv) {
  std::vector<std::uint8_t> bits;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    // allow surrounding whitespace
    const auto first = tok.find_first_not_of(" \t");
    if (first == std::string::npos)
      throw ConfigError("BitSequence: empty element in '" + csv + "'");
    const auto last = tok.find_last_not_of(" \t");
    tok = tok.substr(first, last - first + 1);
    if (tok == "0")
      bits.push_back(0);
    else if (tok == "1")
      bits.push_back(1);
    else
      throw ConfigError("BitSequence: invalid element '" + tok + "'");
  }
  return BitSequence(std::move(bits));
}

std::string BitSequence::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (i) out += ',';
    out += static_cast<char>('0' + bits_[i]);
  }
  return out;
}

BitSequence npc25() {
  return BitSequence({0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1,
                      1, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0});
}

BitSequence barker13() {
  return BitSequence({1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1, 0, 1});
}

std::vector<int> aperiodic_autocorrelation(const BitSequence& seq) {
  const std::size_t n = seq.size();
  std::vector<int> r(n, 0);
  for (std::size_t lag = 0; lag < n; ++lag) {
    int acc = 0;
    for (std::size_t m = 0; m + lag < n; ++m) acc += seq.bipolar(m) * seq.bipolar(m + lag);
    r[lag] = acc;
  }
  return r;
}

double psl_db(const BitSequence& seq) {
  const auto r = aperiodic_autocorrelation(seq);
  int peak_sidelobe = 0;
  for (std::size_t lag = 1; lag < r.size(); ++lag)
    peak_sidelobe = std::max(peak_sidelobe, std::abs(r[lag]));
  if (peak_sidelobe == 0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(static_cast<double>(seq.size()) / peak_sidelobe);
}

FskParams FskParams::make(double f0_hz, double f1_hz, double bit_seconds) {
  if (f0_hz <= 0.0 || f1_hz <= 0.0) throw ConfigError("FskParams: tone frequencies must be > 0");
  if (f0_hz == f1_hz) throw ConfigError("FskParams: F0 and F1 must differ");
  if (bit_seconds <= 0.0) throw ConfigError("FskParams: bit duration must be > 0");
  const double p0 = bit_seconds * f0_hz;
  const double p1 = bit_seconds * f1_hz;
  const double tol = 1e-9;
  if (std::abs(p0 - std::round(p0)) > tol * p0 + tol ||
      std::abs(p1 - std::round(p1)) > tol * p1 + tol) {
    throw ConfigError("FskParams: a whole number of F0 and F1 periods must fit in one bit");
  }
  FskParams p;
  p.f0_hz = f0_hz;
  p.f1_hz = f1_hz;
  p.bit_seconds = bit_seconds;
  // chip = half-period of the faster tone, the finest reflection interval
  p.chip_seconds = 1.0 / (2.0 * std::max(f0_hz, f1_hz));
  p.chips_per_bit = static_cast<int>(std::llround(bit_seconds / p.chip_seconds));
  return p;
}

int square_wave_sign(double tau, double period) {
  double u = tau / period;
  u -= std::floor(u);
  // Snap near-edge values so both sides of the model agree on boundaries.
  if (u > 1.0 - 1e-9) u = 0.0;
  if (std::abs(u - 0.5) < 1e-9) u = 0.5;
  return u < 0.5 ? 1 : -1;
}

int reflection_state(const BitSequence& bits, const FskParams& fsk, double t) {
  const double total = static_cast<double>(bits.size()) * fsk.bit_seconds;
  if (t < 0.0 || t >= total) return 0;
  auto n = static_cast<std::size_t>(t / fsk.bit_seconds);
  if (n >= bits.size()) n = bits.size() - 1;  // guards t just below `total`
  const double f = bits.bit(n) ? fsk.f1_hz : fsk.f0_hz;
  return square_wave_sign(t - static_cast<double>(n) * fsk.bit_seconds, 1.0 / f);
}

} // namespace zeddet
