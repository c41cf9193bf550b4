#pragma once

#include <cstddef>

#include "iirrelay/numerics.hpp"

namespace iirrelay {

/// Pole magnitudes |beta * h_rr| at or above 1 - kStabilityGuard are rejected.
inline constexpr double kStabilityGuard = 1e-6;

/// Hop gains below this magnitude are redrawn by draw_channels.
inline constexpr double kMinHopGain = 1e-12;

/// Per-link variances of the quasi-static Rayleigh draws plus noise powers.
struct ChannelConfig {
  double var_sr = 1.0;
  double var_rd = 1.0;
  double var_rr = 0.031622776601683791;  // -15 dB residual self-interference
  double var_sd = 0.0;                   // 0 disables the direct link
  double sigma2_R = 0.1;
  double sigma2_D = 0.1;

  /// Unit-variance relay hops, noise powers 1/SNR_c at both receivers.
  /// A negative `direct_pathloss_db` means no direct link.
  static ChannelConfig from_db(double snr_c_db, double rsi_db, double direct_pathloss_db = -1.0);

  void validate() const;
};

/// One quasi-static draw, held for a whole frame.
struct ChannelRealization {
  Complex h_sr{1.0, 0.0};
  Complex h_rd{1.0, 0.0};
  Complex h_rr{};
  Complex h_sd{};
  double sigma2_R = 0.1;
  double sigma2_D = 0.1;
};

/// Taps of the rational end-to-end channel: H1 = 1/A, H2 = B/A with
/// A(z) = a0 + a1 z^-1 and B(z) = b0 + b1 z^-1.
///
/// B shares A's normalisation, i.e. b = a0 * [h_sd, beta h_sr h_rd - beta h_rr h_sd],
/// so that H2 = h_sd + z^-1 H1 exactly.
struct IirCoefficients {
  Complex a0;
  Complex a1;
  Complex b0;
  Complex b1;

  /// beta * h_rr, the single pole of H1.
  Complex pole() const { return -a1 / a0; }
};

ChannelRealization draw_channels(Rng& rng, const ChannelConfig& cfg);

bool is_stable(double beta, Complex h_rr);

/// Throws StabilityError unless is_stable(beta, h_rr).
void require_stable(double beta, Complex h_rr);

IirCoefficients compute_coeffs(const ChannelRealization& ch, double beta);

/// A_k = a0 + a1 e^{-j 2 pi k / N}, the N-point DFT of [a0, a1, 0, ...].
CVec denominator_spectrum(const IirCoefficients& c, std::size_t n);
/// B_k, the N-point DFT of [b0, b1, 0, ...].
CVec numerator_spectrum(const IirCoefficients& c, std::size_t n);

/// H1(e^{j 2 pi k / N}) = 1 / A_k.
Complex frequency_response_h1(const IirCoefficients& c, std::size_t k, std::size_t n);

/// h_j = beta h_rd (beta h_rr)^(j-1) for j = 1..taps (relay-to-destination response).
CVec relay_impulse_taps(const ChannelRealization& ch, double beta, std::size_t taps);

}  // namespace iirrelay
