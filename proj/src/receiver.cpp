#include "iirrelay/receiver.hpp"

#include <cmath>
#include <string>

namespace iirrelay {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::prefilter: return "prefilter";
    case Scheme::cp_ofdm: return "cp_ofdm";
    case Scheme::hd_fdd: return "hd_fdd";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "proposed") return Scheme::proposed;
  if (name == "prefilter") return Scheme::prefilter;
  if (name == "cp_ofdm") return Scheme::cp_ofdm;
  if (name == "hd_fdd") return Scheme::hd_fdd;
  throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

std::size_t count_blocks(std::size_t stream_length, std::size_t n, std::size_t offset) {
  if (stream_length < offset) return 0;
  return (stream_length - offset) / (n + 1);
}

std::vector<CVec> extract_blocks(std::span<const Complex> y, std::size_t n, std::size_t blocks, std::size_t offset) {
  if (n == 0) throw InvalidInput("block size must be positive");
  const std::size_t need = offset + blocks * (n + 1);
  if (y.size() < need)
    throw FramingError("stream of " + std::to_string(y.size()) + " samples is shorter than the " + std::to_string(need) +
                       " required");
  std::vector<CVec> out;
  out.reserve(blocks);
  for (std::size_t i = 0; i < blocks; ++i) {
    const auto first = y.begin() + static_cast<std::ptrdiff_t>(offset + i * (n + 1) + 1);
    out.emplace_back(first, first + static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

FrequencyEqualizer FrequencyEqualizer::inverse_of(const CVec& h, std::string_view what) {
  CVec w(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (std::abs(h[k]) < kMinSubcarrierGain) throw SingularSubcarrier(std::string(what), k);
    w[k] = 1.0 / h[k];
  }
  return FrequencyEqualizer(std::move(w));
}

FrequencyEqualizer FrequencyEqualizer::iir(const IirCoefficients& c, std::size_t n) {
  return FrequencyEqualizer(denominator_spectrum(c, n));
}

FrequencyEqualizer FrequencyEqualizer::mixed(const IirCoefficients& c, std::size_t n) {
  FrequencyEqualizer eq = inverse_of(numerator_spectrum(c, n), "B_k vanishes");
  const CVec a = denominator_spectrum(c, n);
  for (std::size_t k = 0; k < n; ++k) eq.weights_[k] *= a[k];
  return eq;
}

FrequencyEqualizer FrequencyEqualizer::truncated(const ChannelRealization& ch, double beta, std::size_t n,
                                                 bool with_direct) {
  const CVec h = relay_impulse_taps(ch, beta, 2);
  CVec taps(n, Complex{});
  if (with_direct) {
    taps[0] = ch.h_sd;
    if (n > 1) taps[1] = ch.h_sr * h[0];
  } else {
    taps[0] = ch.h_sr * h[0];
    if (n > 1) taps[1] = ch.h_sr * h[1];
  }
  fft_plan(n).forward(taps);
  return inverse_of(taps, "truncated channel response vanishes");
}

FrequencyEqualizer FrequencyEqualizer::flat(Complex gain, std::size_t n) {
  return inverse_of(CVec(n, gain), "flat channel gain vanishes");
}

FrequencyEqualizer FrequencyEqualizer::fir(const IirCoefficients& c, std::size_t n) {
  return inverse_of(numerator_spectrum(c, n), "B_k vanishes");
}

CVec FrequencyEqualizer::apply_freq(std::span<const Complex> yblock) const {
  if (yblock.size() != weights_.size()) throw InvalidInput("block length does not match the equalizer");
  CVec f(yblock.begin(), yblock.end());
  fft_plan(f.size()).forward(f);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] *= weights_[k];
  return f;
}

EqualizedBlock FrequencyEqualizer::apply(std::span<const Complex> yblock) const {
  EqualizedBlock out;
  out.freq = apply_freq(yblock);
  out.time = out.freq;
  fft_plan(out.time.size()).inverse(out.time);
  return out;
}

EqualizedBlock equalize_iir(std::span<const Complex> yblock, const IirCoefficients& c) {
  return FrequencyEqualizer::iir(c, yblock.size()).apply(yblock);
}

EqualizedBlock equalize_mixed(std::span<const Complex> yblock, const IirCoefficients& c) {
  return FrequencyEqualizer::mixed(c, yblock.size()).apply(yblock);
}

EqualizedBlock equalize_truncated(std::span<const Complex> yblock, const ChannelRealization& ch, double beta,
                                  bool with_direct) {
  return FrequencyEqualizer::truncated(ch, beta, yblock.size(), with_direct).apply(yblock);
}

void BerRecord::add(std::uint64_t more_bits, std::uint64_t more_errors) {
  bits += more_bits;
  errors += more_errors;
  ber = bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
}

double BerRecord::sigma() const {
  if (bits == 0) return 0.0;
  return std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits));
}

BerRecord demap_and_count(std::span<const CVec> freq_blocks, std::span<const std::uint8_t> reference,
                          const Constellation& c, double symbol_power) {
  if (freq_blocks.empty()) throw InvalidInput("no blocks to demap");
  const std::size_t n = freq_blocks.front().size();
  const std::size_t bps = c.bits_per_symbol();
  if (reference.size() != freq_blocks.size() * n * bps)
    throw InvalidInput("reference bit count does not match the equalized blocks");
  if (!(symbol_power > 0.0)) throw InvalidInput("symbol power must be positive");

  const double inv = 1.0 / symbol_amplitude(n, symbol_power);
  std::uint64_t errors = 0;
  std::size_t pos = 0;
  for (const auto& block : freq_blocks) {
    if (block.size() != n) throw InvalidInput("equalized blocks must share one length");
    for (const auto& s : block) {
      const unsigned label = c.slice(s * inv);
      for (unsigned b = static_cast<unsigned>(bps); b-- > 0;) errors += ((label >> b) & 1u) != (reference[pos++] & 1u);
    }
  }
  BerRecord rec;
  rec.add(reference.size(), errors);
  return rec;
}

}  // namespace iirrelay
