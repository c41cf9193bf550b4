#include "iirrelay/txchain.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "iirrelay/channel.hpp"

namespace iirrelay {

namespace {

constexpr double kSingularTap = 1e-12;

double axis_level(unsigned first, unsigned second) {
  const double sign = first ? -1.0 : 1.0;
  return sign * (second ? 3.0 : 1.0);
}

CVec make_qpsk() {
  CVec pts(4);
  const double s = 1.0 / std::sqrt(2.0);
  for (unsigned label = 0; label < 4; ++label) {
    const unsigned bi = (label >> 1) & 1u;
    const unsigned bq = label & 1u;
    pts[label] = {bi ? -s : s, bq ? -s : s};
  }
  return pts;
}

CVec make_qam16() {
  CVec pts(16);
  const double s = 1.0 / std::sqrt(10.0);
  for (unsigned label = 0; label < 16; ++label) {
    const double re = axis_level((label >> 3) & 1u, (label >> 2) & 1u);
    const double im = axis_level((label >> 1) & 1u, label & 1u);
    pts[label] = {s * re, s * im};
  }
  return pts;
}

void check_blocks(std::span<const SymbolBlock> blocks) {
  if (blocks.empty()) throw InvalidInput("frame needs at least one block");
  const std::size_t n = blocks.front().size();
  if (n == 0) throw InvalidInput("empty symbol block");
  for (const auto& b : blocks)
    if (b.size() != n) throw InvalidInput("symbol blocks must share one length");
}

}  // namespace

std::string_view to_string(Modulation m) { return m == Modulation::qpsk ? "qpsk" : "qam16"; }

Modulation parse_modulation(std::string_view name) {
  if (name == "qpsk" || name == "QPSK") return Modulation::qpsk;
  if (name == "qam16" || name == "16qam" || name == "QAM16" || name == "16QAM") return Modulation::qam16;
  throw InvalidInput("unknown constellation '" + std::string(name) + "'");
}

Constellation::Constellation(Modulation m, unsigned bits, CVec points)
    : modulation_(m), bits_per_symbol_(bits), points_(std::move(points)) {}

const Constellation& Constellation::qpsk() {
  static const Constellation c(Modulation::qpsk, 2, make_qpsk());
  return c;
}

const Constellation& Constellation::qam16() {
  static const Constellation c(Modulation::qam16, 4, make_qam16());
  return c;
}

const Constellation& Constellation::get(Modulation m) { return m == Modulation::qpsk ? qpsk() : qam16(); }

unsigned Constellation::slice(Complex s) const {
  unsigned best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (unsigned label = 0; label < points_.size(); ++label) {
    const double d = std::norm(s - points_[label]);
    if (d < best_d) {
      best_d = d;
      best = label;
    }
  }
  return best;
}

std::vector<SymbolBlock> map_bits(std::span<const std::uint8_t> bits, const Constellation& c, std::size_t n) {
  const std::size_t per_block = n * c.bits_per_symbol();
  if (n == 0 || bits.empty() || bits.size() % per_block != 0)
    throw InvalidInput("bit count " + std::to_string(bits.size()) + " is not a multiple of N * bits_per_symbol = " +
                       std::to_string(per_block));
  std::vector<SymbolBlock> blocks(bits.size() / per_block, SymbolBlock(n));
  std::size_t pos = 0;
  for (auto& block : blocks) {
    for (auto& sym : block) {
      unsigned label = 0;
      for (unsigned b = 0; b < c.bits_per_symbol(); ++b) label = (label << 1) | (bits[pos++] & 1u);
      sym = c.map(label);
    }
  }
  return blocks;
}

Bits demap_symbols(std::span<const Complex> symbols, const Constellation& c) {
  Bits out;
  out.reserve(symbols.size() * c.bits_per_symbol());
  for (const auto& s : symbols) {
    const unsigned label = c.slice(s);
    for (unsigned b = c.bits_per_symbol(); b-- > 0;) out.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
  }
  return out;
}

double symbol_amplitude(std::size_t n, double sample_power) {
  return std::sqrt(static_cast<double>(n) * sample_power);
}

double precoded_symbol_power(double alpha, std::size_t n) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in [0, 1)");
  const double nn = static_cast<double>(n);
  return (nn + 1.0) / ((1.0 + alpha) / (1.0 - alpha) + nn);
}

PrecodedFrame precode_frame(std::span<const SymbolBlock> blocks, Complex a0, Complex a1, double alpha) {
  check_blocks(blocks);
  if (std::abs(a0) < kSingularTap) throw InvalidInput("a0 must be non-zero");
  const std::size_t n = blocks.front().size();

  IirCoefficients coeffs{a0, a1, {}, {}};
  const CVec a_spec = denominator_spectrum(coeffs, n);
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(a_spec[k]) < kSingularTap) throw SingularSubcarrier("precoder cannot invert A_k", k);

  PrecodedFrame frame;
  frame.block_size = n;
  frame.sigma_x2 = precoded_symbol_power(alpha, n);
  frame.stream.reserve(blocks.size() * (n + 1));
  frame.guard_values.reserve(blocks.size());
  frame.designed_blocks.reserve(blocks.size());

  const FftPlan& plan = fft_plan(n);
  const double amp = symbol_amplitude(n, frame.sigma_x2);
  Complex prev_tail{};  // y^{i-1}_{N-1}; block 0 is all zero
  CVec x(n);
  CVec y(n);
  for (const auto& block : blocks) {
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = amp * block[k];
      y[k] = x[k] / a_spec[k];
    }
    plan.inverse(x);
    plan.inverse(y);

    const Complex gi = a0 * y[n - 1] + a1 * prev_tail;
    frame.guard_values.push_back(gi);
    frame.stream.push_back(gi);
    frame.stream.insert(frame.stream.end(), x.begin(), x.end());
    frame.designed_blocks.push_back(y);
    prev_tail = y[n - 1];
  }
  return frame;
}

double prefilter_symbol_power(Complex a0, Complex a1) {
  const double g = std::norm(a0) + std::norm(a1);
  if (!(g > 0.0)) throw InvalidInput("pre-filter taps are all zero");
  return 1.0 / g;
}

CVec prefilter_frame(std::span<const SymbolBlock> blocks, Complex a0, Complex a1) {
  if (std::abs(a0) < kSingularTap) throw InvalidInput("a0 must be non-zero");
  CVec s = standard_cp_frame(blocks);
  const double amp = std::sqrt(prefilter_symbol_power(a0, a1));
  CVec out(s.size());
  Complex prev{};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Complex cur = amp * s[i];
    out[i] = a0 * cur + a1 * prev;
    prev = cur;
  }
  return out;
}

CVec standard_cp_frame(std::span<const SymbolBlock> blocks) {
  check_blocks(blocks);
  const std::size_t n = blocks.front().size();
  const FftPlan& plan = fft_plan(n);
  CVec stream;
  stream.reserve(blocks.size() * (n + 1));
  const double amp = symbol_amplitude(n, 1.0);
  CVec x(n);
  for (const auto& block : blocks) {
    for (std::size_t k = 0; k < n; ++k) x[k] = amp * block[k];
    plan.inverse(x);
    stream.push_back(x[n - 1]);
    stream.insert(stream.end(), x.begin(), x.end());
  }
  return stream;
}

}  // namespace iirrelay
