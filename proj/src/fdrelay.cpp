#include "iirrelay/fdrelay.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace iirrelay {

namespace {

constexpr double kDivergence = 1e12;

void check_noise(const NoiseStreams* noise, std::size_t length) {
  if (noise && (noise->relay.size() != length || noise->destination.size() != length))
    throw InvalidInput("noise streams must match the input length");
}

void check_finite(Complex v, std::size_t n) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericError("non-finite output", n);
}

}  // namespace

NoiseStreams draw_noise(Rng& rng, std::size_t length, double sigma2_R, double sigma2_D) {
  NoiseStreams ns{CVec(length), CVec(length)};
  fill_gaussian(rng, sigma2_R, ns.relay);
  fill_gaussian(rng, sigma2_D, ns.destination);
  return ns;
}

LinkOutput simulate_fd_link(std::span<const Complex> x, const ChannelRealization& ch, double beta,
                            const NoiseStreams* noise, bool with_direct) {
  require_stable(beta, ch.h_rr);
  check_noise(noise, x.size());

  LinkOutput out;
  out.y.resize(x.size());
  out.relay_noise_at_destination.assign(x.size(), Complex{});
  out.delay_offset = with_direct ? 0 : 1;

  const Complex h_sd = with_direct ? ch.h_sd : Complex{};
  Complex t{};        // relay transmit sample
  Complex t_noise{};  // part of t driven by relay noise only
  for (std::size_t n = 0; n < x.size(); ++n) {
    const Complex n_r = noise ? noise->relay[n] : Complex{};
    const Complex n_d = noise ? noise->destination[n] : Complex{};

    const Complex r = ch.h_sr * x[n] + ch.h_rr * t + n_r;
    const Complex y = ch.h_rd * t + h_sd * x[n] + n_d;
    check_finite(y, n);
    out.y[n] = y;
    out.relay_noise_at_destination[n] = ch.h_rd * t_noise;

    t = beta * r;
    t_noise = beta * (ch.h_rr * t_noise + n_r);
  }
  return out;
}

LinkOutput simulate_fd_link(std::span<const Complex> x, const ChannelRealization& ch, double beta, Rng& rng,
                            bool with_direct, bool noiseless) {
  require_stable(beta, ch.h_rr);
  if (noiseless) return simulate_fd_link(x, ch, beta, nullptr, with_direct);
  const NoiseStreams ns = draw_noise(rng, x.size(), ch.sigma2_R, ch.sigma2_D);
  return simulate_fd_link(x, ch, beta, &ns, with_direct);
}

CVec ideal_iir_filter(std::span<const Complex> x, Complex a0, Complex a1) {
  if (std::abs(a0) == 0.0) throw InvalidInput("a0 must be non-zero");
  if (std::abs(a1) >= std::abs(a0)) throw StabilityError("|a1 / a0| must be below 1");
  CVec y(x.size());
  Complex prev{};
  for (std::size_t n = 0; n < x.size(); ++n) {
    prev = (x[n] - a1 * prev) / a0;
    if (!(std::abs(prev) <= kDivergence)) throw StabilityError("ideal IIR filter diverged at sample " + std::to_string(n));
    y[n] = prev;
  }
  return y;
}

double hd_fdd_gain(const ChannelRealization& ch) {
  const double denom = std::norm(ch.h_sr) + ch.sigma2_R;
  if (!(denom > 0.0)) throw DegenerateChannel("half-duplex relay sees no signal");
  return 1.0 / std::sqrt(denom);
}

LinkOutput simulate_hd_fdd(std::span<const Complex> x, const ChannelRealization& ch, const NoiseStreams* noise) {
  check_noise(noise, x.size());
  const double beta = hd_fdd_gain(ch);
  LinkOutput out;
  out.y.resize(x.size());
  out.relay_noise_at_destination.assign(x.size(), Complex{});
  out.delay_offset = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const Complex n_r = noise ? noise->relay[n] : Complex{};
    const Complex n_d = noise ? noise->destination[n] : Complex{};
    const Complex relay_out = beta * (ch.h_sr * x[n] + n_r);
    out.y[n] = ch.h_rd * relay_out + n_d;
    out.relay_noise_at_destination[n] = ch.h_rd * beta * n_r;
    check_finite(out.y[n], n);
  }
  return out;
}

LinkOutput simulate_hd_fdd(std::span<const Complex> x, const ChannelRealization& ch, Rng& rng, bool noiseless) {
  if (noiseless) return simulate_hd_fdd(x, ch, nullptr);
  const NoiseStreams ns = draw_noise(rng, x.size(), ch.sigma2_R, ch.sigma2_D);
  return simulate_hd_fdd(x, ch, &ns);
}

void dump_stream(const std::filesystem::path& path, std::span<const Complex> samples) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open dump file " + path.string());
  for (const auto& s : samples) {
    for (double part : {s.real(), s.imag()}) {
      std::uint64_t bits;
      std::memcpy(&bits, &part, sizeof bits);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      char buf[8];
      std::memcpy(buf, &bits, sizeof buf);
      os.write(buf, sizeof buf);
    }
  }
  if (!os) throw Error("failed writing dump file " + path.string());
}

}  // namespace iirrelay
