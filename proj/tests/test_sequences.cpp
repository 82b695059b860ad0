#include "zeddet/sequences.hpp"

#include "zeddet/errors.hpp"
#include "zeddet/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace zeddet;

namespace {

// independent oracle: explicit zero-padded shift-and-sum
std::vector<int> autocorr_oracle(const BitSequence& seq) {
  const int n = static_cast<int>(seq.size());
  std::vector<int> s(static_cast<std::size_t>(2 * n), 0);  // zero-padded bipolar copy
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = seq.bipolar(static_cast<std::size_t>(i));
  std::vector<int> r(static_cast<std::size_t>(n), 0);
  for (int lag = 0; lag < n; ++lag) {
    int acc = 0;
    for (int i = 0; i < n; ++i)
      acc += s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i + lag)];
    r[static_cast<std::size_t>(lag)] = acc;
  }
  return r;
}

} // namespace

TEST_CASE("npc25 is the printed 25-bit sequence") {
  const auto c = npc25();
  const std::vector<std::uint8_t> expected{0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1,
                                           1, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0};
  CHECK(c.size() == 25);
  CHECK(c.bits() == expected);
  CHECK(c.bipolar(0) == -1);
  int sum = 0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += c.bipolar(i);
  CHECK(sum == 3);  // 14 ones, 11 zeros
}

TEST_CASE("bit sequence validation and csv round trip") {
  CHECK_THROWS_AS(BitSequence(std::vector<std::uint8_t>{}), ConfigError);
  CHECK_THROWS_AS(BitSequence({0, 2}), ConfigError);
  CHECK_THROWS_AS(BitSequence::from_string("0,x,1"), ConfigError);
  const auto seq = BitSequence::from_string(" 1, 0 ,1");
  CHECK(seq.size() == 3);
  CHECK(seq.to_string() == "1,0,1");
  CHECK(BitSequence::from_string(npc25().to_string()).bits() == npc25().bits());
}

TEST_CASE("aperiodic autocorrelation basics") {
  CHECK(aperiodic_autocorrelation(BitSequence({1})) == std::vector<int>{1});
  // bits [1,1,0] -> bipolar [+1,+1,-1]
  CHECK(aperiodic_autocorrelation(BitSequence({1, 1, 0})) == std::vector<int>{3, 0, -1});
  const auto r = aperiodic_autocorrelation(npc25());
  CHECK(r[0] == 25);
  int max_sl = 0;
  for (std::size_t lag = 1; lag < r.size(); ++lag) max_sl = std::max(max_sl, std::abs(r[lag]));
  CHECK(max_sl == 2);
}

TEST_CASE("autocorrelation matches brute-force oracle for all sequences up to length 8") {
  for (int n = 1; n <= 8; ++n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      const BitSequence seq(bits);
      CHECK(aperiodic_autocorrelation(seq) == autocorr_oracle(seq));
    }
  }
}

TEST_CASE("lag 0 equals N_b for random sequences") {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 64);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    const BitSequence seq(bits);
    CHECK(aperiodic_autocorrelation(seq)[0] == n);
  }
}

TEST_CASE("psl values") {
  CHECK(psl_db(npc25()) == doctest::Approx(20.0 * std::log10(12.5)).epsilon(1e-12));
  CHECK(std::abs(psl_db(npc25()) - 21.9382) < 1e-3);
  CHECK(psl_db(barker13()) == doctest::Approx(20.0 * std::log10(13.0)).epsilon(1e-12));
  CHECK(std::abs(psl_db(barker13()) - 22.28) < 0.01);
  CHECK(psl_db(BitSequence({1, 1})) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
  // all-zero sidelobes report infinity
  CHECK(std::isinf(psl_db(BitSequence({1}))));
}

TEST_CASE("fsk parameter validation") {
  const auto fsk = FskParams::make(125.0, 500.0, 32e-3);
  CHECK(fsk.chip_seconds == doctest::Approx(1e-3));
  CHECK(fsk.chips_per_bit == 32);
  CHECK(fsk.bit_seconds == doctest::Approx(fsk.chips_per_bit * fsk.chip_seconds));
  CHECK_THROWS_AS(FskParams::make(125.0, 125.0, 32e-3), ConfigError);
  CHECK_THROWS_AS(FskParams::make(-1.0, 500.0, 32e-3), ConfigError);
  // 130 Hz does not complete whole periods in 32 ms
  CHECK_THROWS_AS(FskParams::make(130.0, 500.0, 32e-3), ConfigError);
}

TEST_CASE("reflection state square wave") {
  const auto fsk = FskParams::make(125.0, 500.0, 32e-3);
  const BitSequence zero({0});
  const auto fsk1 = FskParams::make(125.0, 500.0, 8e-3);  // single-period bit for [0]
  CHECK(reflection_state(zero, fsk1, 0.0) == 1);
  CHECK(reflection_state(zero, fsk1, 4.5e-3) == -1);  // second half of the 8 ms period
  CHECK(reflection_state(zero, fsk1, 8e-3) == 0);     // one sample past the sequence
  CHECK(reflection_state(zero, fsk1, -1e-6) == 0);

  // balanced: the state integrates to zero over any whole bit
  const BitSequence code = npc25();
  for (std::size_t bit = 0; bit < code.size(); ++bit) {
    int sum = 0;
    const int steps = 64;  // 0.5 ms grid, resolves both tones
    for (int i = 0; i < steps; ++i) {
      const double t = (static_cast<double>(bit) + (i + 0.25) / steps) * fsk.bit_seconds;
      sum += reflection_state(code, fsk, t);
    }
    CHECK(sum == 0);
  }

  // deterministic and pure
  CHECK(reflection_state(code, fsk, 0.01725) == reflection_state(code, fsk, 0.01725));
}

TEST_CASE("square wave edge snapping is consistent") {
  CHECK(square_wave_sign(0.0, 8e-3) == 1);
  CHECK(square_wave_sign(4e-3, 8e-3) == -1);
  CHECK(square_wave_sign(4e-3 - 1e-15, 8e-3) == -1);  // snaps onto the edge
  CHECK(square_wave_sign(8e-3 - 1e-15, 8e-3) == 1);   // wraps to the period start
  CHECK(square_wave_sign(3.9999e-3, 8e-3) == 1);
}
