#ifndef ZEDDET_SEQUENCES_HPP
#define ZEDDET_SEQUENCES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace zeddet {

/// Binary synchronization code. Elements are 0/1; the bipolar view maps
/// bit b to 2b-1.
class BitSequence {
public:
  BitSequence() = default;
  explicit BitSequence(std::vector<std::uint8_t> bits);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t bit(std::size_t i) const { return bits_[i]; }
  int bipolar(std::size_t i) const { return 2 * static_cast<int>(bits_[i]) - 1; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Comma-separated form used in scenario files, e.g. "0,1,1,0".
  static BitSequence from_string(const std::string& csv);
  std::string to_string() const;

private:
  std::vector<std::uint8_t> bits_;
};

/// The 25-bit near-perfect code used as the synchronization sequence
/// (peak 25, max aperiodic sidelobe 2).
BitSequence npc25();

/// Barker-13, the best classical short comparison code.
BitSequence barker13();

/// Aperiodic (linear, zero-padded) autocorrelation of the bipolar view,
/// indexed by lag 0..N_b-1. Lag 0 equals N_b.
std::vector<int> aperiodic_autocorrelation(const BitSequence& seq);

/// Peak-to-sidelobe level: 20*log10(N_b / max_{lag>=1} |autocorr|).
/// All-zero sidelobes (including N_b = 1) report +infinity.
double psl_db(const BitSequence& seq);

/// FSK chip parameters for the tag's two reflection tones.
struct FskParams {
  double f0_hz = 0.0;   // bit-0 tone
  double f1_hz = 0.0;   // bit-1 tone
  double bit_seconds = 0.0;
  double chip_seconds = 0.0;
  int chips_per_bit = 0;

  /// Validates and fills chip fields: bit duration must hold a whole number
  /// of periods of both tones so every bit is balanced and phase-continuous.
  static FskParams make(double f0_hz, double f1_hz, double bit_seconds);
};

/// Sign of a 50%-duty square wave with phase 0 at tau = 0 (+1 first half).
/// Values within 1e-9 periods of an edge snap onto the edge so that the
/// synthesizer and the receiver classify boundary samples identically.
int square_wave_sign(double tau, double period);

/// Eq-style reflection state g(t) of a tag transmitting `bits`: +1/-1 square
/// wave at F_{b_n} inside the sequence, phase-aligned to each bit boundary;
/// 0 (transparent, no modulation) outside [0, N_b*T_b).
int reflection_state(const BitSequence& bits, const FskParams& fsk, double t);

} // namespace zeddet

#endif
