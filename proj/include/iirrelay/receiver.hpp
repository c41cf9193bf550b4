#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "iirrelay/channel.hpp"
#include "iirrelay/numerics.hpp"
#include "iirrelay/txchain.hpp"

namespace iirrelay {

/// Singular-subcarrier threshold for the zero-forcing divides.
inline constexpr double kMinSubcarrierGain = 1e-9;

enum class Scheme { proposed, prefilter, cp_ofdm, hd_fdd };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

struct EqualizedBlock {
  CVec freq;  // X_hat
  CVec time;  // x_hat = IDFT(X_hat)
};

/// Drop `offset` samples, then split `blocks` groups of N + 1 samples and
/// discard the first (GI/CP) sample of each.
std::vector<CVec> extract_blocks(std::span<const Complex> y, std::size_t n, std::size_t blocks, std::size_t offset);

/// Number of whole N + 1 groups after `offset`.
std::size_t count_blocks(std::size_t stream_length, std::size_t n, std::size_t offset);

/// Per-subcarrier weights W_k applied as X_hat_k = W_k DFT(y)_k.
/// Built once per channel realization and reused for every block of a frame.
class FrequencyEqualizer {
public:
  /// W_k = A_k.
  static FrequencyEqualizer iir(const IirCoefficients& c, std::size_t n);
  /// W_k = A_k / B_k; throws SingularSubcarrier if |B_k| < kMinSubcarrierGain.
  static FrequencyEqualizer mixed(const IirCoefficients& c, std::size_t n);
  /// One tap per subcarrier against the first two effective taps of the relay
  /// response; the rest of the IIR tail is left as interference.
  /// Without a direct link the taps are [h_sr h_1, h_sr h_2] (after the one-sample
  /// alignment), with it [h_sd, h_sr h_1].
  static FrequencyEqualizer truncated(const ChannelRealization& ch, double beta, std::size_t n, bool with_direct);
  /// W_k = 1 / gain.
  static FrequencyEqualizer flat(Complex gain, std::size_t n);
  /// W_k = 1 / B_k (pre-filtered stream over a mixed channel).
  static FrequencyEqualizer fir(const IirCoefficients& c, std::size_t n);

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const Complex> weights() const noexcept { return weights_; }

  EqualizedBlock apply(std::span<const Complex> yblock) const;
  /// Frequency-domain output only.
  CVec apply_freq(std::span<const Complex> yblock) const;

private:
  explicit FrequencyEqualizer(CVec w) : weights_(std::move(w)) {}
  static FrequencyEqualizer inverse_of(const CVec& h, std::string_view what);
  CVec weights_;
};

EqualizedBlock equalize_iir(std::span<const Complex> yblock, const IirCoefficients& c);
EqualizedBlock equalize_mixed(std::span<const Complex> yblock, const IirCoefficients& c);
EqualizedBlock equalize_truncated(std::span<const Complex> yblock, const ChannelRealization& ch, double beta,
                                  bool with_direct = false);

struct BerRecord {
  Scheme scheme = Scheme::proposed;
  double sweep_value = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;

  void add(std::uint64_t more_bits, std::uint64_t more_errors);
  /// Binomial standard deviation of the BER estimate.
  double sigma() const;
};

/// Slice equalized frequency-domain blocks after removing the transmit scale
/// symbol_amplitude(N, symbol_power) and count bit errors against `reference`.
BerRecord demap_and_count(std::span<const CVec> freq_blocks, std::span<const std::uint8_t> reference,
                          const Constellation& c, double symbol_power);

}  // namespace iirrelay
