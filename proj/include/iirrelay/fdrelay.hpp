#pragma once

#include <cstddef>
#include <filesystem>
#include <span>

#include "iirrelay/channel.hpp"
#include "iirrelay/numerics.hpp"

namespace iirrelay {

/// Additive noise sequences at the relay input and at the destination.
struct NoiseStreams {
  CVec relay;
  CVec destination;
};

/// Relay noise first, then destination noise, each CN(0, sigma2).
NoiseStreams draw_noise(Rng& rng, std::size_t length, double sigma2_R, double sigma2_D);

struct LinkOutput {
  CVec y;
  /// Destination-side contribution of the relay noise, aligned with y.
  CVec relay_noise_at_destination;
  /// Samples to skip before the first GI: 1 for the relay-only path, 0 with a direct link.
  std::size_t delay_offset = 0;
};

/// Sample-level full-duplex AF loop with one sample of relay processing delay:
///   r_n = h_sr x_n + h_rr t_n + nR_n
///   y_n = h_rd t_n + h_sd x_n [direct link] + nD_n
///   t_{n+1} = beta r_n,  t_0 = 0
///
/// `noise` may be null for a noiseless run.
LinkOutput simulate_fd_link(std::span<const Complex> x, const ChannelRealization& ch, double beta,
                            const NoiseStreams* noise, bool with_direct);

/// Draws fresh noise from `rng` unless `noiseless`.
LinkOutput simulate_fd_link(std::span<const Complex> x, const ChannelRealization& ch, double beta, Rng& rng,
                            bool with_direct, bool noiseless);

/// y_n = (x_n - a1 y_{n-1}) / a0 with y_{-1} = 0, the ideal 1/A(z) channel.
CVec ideal_iir_filter(std::span<const Complex> x, Complex a0, Complex a1);

/// AF gain of the half-duplex baseline: beta^2 = 1 / (|h_sr|^2 + sigma_R^2).
double hd_fdd_gain(const ChannelRealization& ch);

/// Half-duplex FDD relay: two cascaded flat hops, no self-interference and no
/// loop delay (the hops use separate bands). The direct link is not combined.
LinkOutput simulate_hd_fdd(std::span<const Complex> x, const ChannelRealization& ch, const NoiseStreams* noise);
LinkOutput simulate_hd_fdd(std::span<const Complex> x, const ChannelRealization& ch, Rng& rng, bool noiseless);

/// Raw dump for waveform inspection: interleaved little-endian float64 re/im.
void dump_stream(const std::filesystem::path& path, std::span<const Complex> samples);

}  // namespace iirrelay
