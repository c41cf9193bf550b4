#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "iirrelay/numerics.hpp"

namespace iirrelay {

using Bits = std::vector<std::uint8_t>;

/// Frequency-domain data symbols of one OFDM block (length N).
using SymbolBlock = CVec;

enum class Modulation { qpsk, qam16 };

std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view name);

/// Gray-labelled constellation with unit mean power.
///
/// Labels are read MSB first. Each pair of bits (b_first, b_second) selects one
/// axis level: 00 -> +1, 01 -> +3, 10 -> -1, 11 -> -3 (16QAM, times 1/sqrt(10)).
/// QPSK uses only the sign bit per axis: bits 00 -> (1 + j)/sqrt(2).
class Constellation {
public:
  static const Constellation& qpsk();
  static const Constellation& qam16();
  static const Constellation& get(Modulation m);

  Modulation modulation() const noexcept { return modulation_; }
  unsigned bits_per_symbol() const noexcept { return bits_per_symbol_; }
  std::span<const Complex> points() const noexcept { return points_; }

  Complex map(unsigned label) const { return points_.at(label); }
  /// Minimum-distance decision, returns the label.
  unsigned slice(Complex s) const;

private:
  Constellation(Modulation m, unsigned bits, CVec points);

  Modulation modulation_;
  unsigned bits_per_symbol_;
  CVec points_;
};

/// Bits -> blocks of n symbols. Bit count must be a multiple of n * bits_per_symbol.
std::vector<SymbolBlock> map_bits(std::span<const std::uint8_t> bits, const Constellation& c, std::size_t n);

/// Hard decisions on already de-scaled symbols.
Bits demap_symbols(std::span<const Complex> symbols, const Constellation& c);

/// Output of the GI precoder for one frame.
struct PrecodedFrame {
  std::size_t block_size = 0;
  double sigma_x2 = 1.0;
  /// [gi_1, x^1_0 .. x^1_{N-1}, gi_2, x^2_0, ...], M (N + 1) samples.
  CVec stream;
  std::vector<Complex> guard_values;
  /// Noiseless designed channel outputs y^i = IDFT(X^i / A).
  std::vector<CVec> designed_blocks;
};

/// Frequency-domain scale that gives time-domain samples of power `sample_power`
/// under the 1/N inverse DFT: sqrt(N * sample_power).
double symbol_amplitude(std::size_t n, double sample_power);

/// Data-symbol power that keeps the precoded stream (GI included) at unit power.
double precoded_symbol_power(double alpha, std::size_t n);

/// Pre-equalising GI design for the single-pole channel 1/A(z).
///
/// The GI of block i is a0 y^i_{N-1} + a1 y^{i-1}_{N-1} (block 0 is all zero),
/// which makes the channel output carry a length-1 cyclic prefix.
PrecodedFrame precode_frame(std::span<const SymbolBlock> blocks, Complex a0, Complex a1, double alpha);

/// sigma_s^2 = 1 / (|a0|^2 + |a1|^2), the symbol power for a unit-power pre-filtered stream.
double prefilter_symbol_power(Complex a0, Complex a1);

/// CP-1 OFDM stream at power sigma_s^2 passed through the FIR A(z) = a0 + a1 z^-1.
CVec prefilter_frame(std::span<const SymbolBlock> blocks, Complex a0, Complex a1);

/// Conventional OFDM with a one-sample cyclic prefix and unit symbol power.
CVec standard_cp_frame(std::span<const SymbolBlock> blocks);

}  // namespace iirrelay
