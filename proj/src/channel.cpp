#include "iirrelay/channel.hpp"

#include <cmath>
#include <string>

namespace iirrelay {

namespace {

constexpr double kSingularTap = 1e-12;

CVec two_tap_spectrum(Complex t0, Complex t1, std::size_t n) {
  if (n == 0) throw InvalidInput("block size must be positive");
  const FftPlan& plan = fft_plan(n);
  CVec taps(n, Complex{});
  taps[0] = t0;
  if (n > 1) taps[1] = t1;
  plan.forward(taps);
  return taps;
}

}  // namespace

ChannelConfig ChannelConfig::from_db(double snr_c_db, double rsi_db, double direct_pathloss_db) {
  ChannelConfig cfg;
  cfg.var_rr = db_to_linear(rsi_db);
  cfg.var_sd = direct_pathloss_db < 0.0 ? 0.0 : db_to_linear(-direct_pathloss_db);
  cfg.sigma2_R = db_to_linear(-snr_c_db);
  cfg.sigma2_D = cfg.sigma2_R;
  return cfg;
}

void ChannelConfig::validate() const {
  for (double v : {var_sr, var_rd, var_rr, var_sd})
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("channel variances must be finite and non-negative");
  if (var_sr == 0.0 || var_rd == 0.0) throw InvalidInput("relay hop variances must be positive");
  if (!(sigma2_R > 0.0) || !(sigma2_D > 0.0) || !std::isfinite(sigma2_R) || !std::isfinite(sigma2_D))
    throw InvalidInput("noise powers must be finite and positive");
}

ChannelRealization draw_channels(Rng& rng, const ChannelConfig& cfg) {
  cfg.validate();
  ChannelRealization ch;
  do {
    ch.h_sr = gaussian_complex(rng, cfg.var_sr);
  } while (std::abs(ch.h_sr) < kMinHopGain);
  do {
    ch.h_rd = gaussian_complex(rng, cfg.var_rd);
  } while (std::abs(ch.h_rd) < kMinHopGain);
  ch.h_rr = gaussian_complex(rng, cfg.var_rr);
  ch.h_sd = gaussian_complex(rng, cfg.var_sd);
  ch.sigma2_R = cfg.sigma2_R;
  ch.sigma2_D = cfg.sigma2_D;
  return ch;
}

bool is_stable(double beta, Complex h_rr) {
  if (!(beta >= 0.0)) throw InvalidInput("amplification factor must be non-negative");
  return beta * std::abs(h_rr) < 1.0 - kStabilityGuard;
}

void require_stable(double beta, Complex h_rr) {
  if (!is_stable(beta, h_rr))
    throw StabilityError("relay loop unstable: |beta h_rr| = " + std::to_string(beta * std::abs(h_rr)) +
                         " >= 1 - guard");
}

IirCoefficients compute_coeffs(const ChannelRealization& ch, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("amplification factor must be positive");
  if (std::abs(ch.h_sr) < kMinHopGain || std::abs(ch.h_rd) < kMinHopGain)
    throw DegenerateChannel("h_sr and h_rd must be non-zero");
  require_stable(beta, ch.h_rr);

  const Complex hop = ch.h_sr * ch.h_rd;
  IirCoefficients c;
  c.a0 = 1.0 / (beta * hop);
  c.a1 = -ch.h_rr / hop;
  c.b0 = c.a0 * ch.h_sd;
  c.b1 = c.a0 * (beta * hop - beta * ch.h_rr * ch.h_sd);
  return c;
}

CVec denominator_spectrum(const IirCoefficients& c, std::size_t n) { return two_tap_spectrum(c.a0, c.a1, n); }

CVec numerator_spectrum(const IirCoefficients& c, std::size_t n) { return two_tap_spectrum(c.b0, c.b1, n); }

Complex frequency_response_h1(const IirCoefficients& c, std::size_t k, std::size_t n) {
  if (k >= n) throw InvalidInput("subcarrier index out of range");
  const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
  const Complex a = c.a0 + c.a1 * Complex{std::cos(ang), std::sin(ang)};
  if (std::abs(a) < kSingularTap) throw SingularSubcarrier("A(z) vanishes on the unit circle", k);
  return 1.0 / a;
}

CVec relay_impulse_taps(const ChannelRealization& ch, double beta, std::size_t taps) {
  if (taps == 0) throw InvalidInput("tap count must be at least 1");
  require_stable(beta, ch.h_rr);
  CVec h(taps);
  const Complex ratio = beta * ch.h_rr;
  Complex tap = beta * ch.h_rd;
  for (auto& t : h) {
    t = tap;
    tap *= ratio;
  }
  return h;
}

}  // namespace iirrelay
