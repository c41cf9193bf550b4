#include <algorithm>
#include <cmath>
#include <limits>

#include "iirrelay/fdrelay.hpp"
#include "iirrelay/harness.hpp"
#include "worker_pool.hpp"

namespace iirrelay {

namespace {

// Sub-streams of one trial seed.
enum Stream : std::uint64_t {
  kChannelStream = 0,
  kDataStream = 1,
  kNoiseStream = 2,
  kPilotDataStream = 3,
  kPilotNoiseStream = 4,
  kDataStream16 = 5,
};

Bits random_bits(Rng& rng, std::size_t count) {
  Bits b(count);
  for (auto& v : b) v = rng.bit();
  return b;
}

const Constellation& constellation_for(Scheme s, Modulation fd) {
  return s == Scheme::hd_fdd ? Constellation::qam16() : Constellation::get(fd);
}

/// Transmitter, channel model and receiver of one scheme on one realization.
struct Chain {
  Scheme scheme;
  CVec stream;  // includes one trailing zero so the delayed relay path stays in range
  FrequencyEqualizer eq;
  double symbol_power;
  std::size_t blocks;
  std::size_t n;
};

Chain build_chain(Scheme scheme, const ChannelRealization& ch, double beta, std::span<const SymbolBlock> blocks,
                  bool with_direct) {
  const std::size_t n = blocks.front().size();
  switch (scheme) {
    case Scheme::proposed: {
      const IirCoefficients c = compute_coeffs(ch, beta);
      const double alpha = std::norm(beta * ch.h_rr);
      PrecodedFrame frame = precode_frame(blocks, c.a0, c.a1, alpha);
      frame.stream.push_back({});
      auto eq = with_direct ? FrequencyEqualizer::mixed(c, n) : FrequencyEqualizer::iir(c, n);
      return {scheme, std::move(frame.stream), std::move(eq), frame.sigma_x2, blocks.size(), n};
    }
    case Scheme::prefilter: {
      const IirCoefficients c = compute_coeffs(ch, beta);
      CVec s = prefilter_frame(blocks, c.a0, c.a1);
      s.push_back({});
      auto eq = with_direct ? FrequencyEqualizer::fir(c, n) : FrequencyEqualizer::flat(1.0, n);
      return {scheme, std::move(s), std::move(eq), prefilter_symbol_power(c.a0, c.a1), blocks.size(), n};
    }
    case Scheme::cp_ofdm: {
      require_stable(beta, ch.h_rr);
      CVec s = standard_cp_frame(blocks);
      s.push_back({});
      return {scheme, std::move(s), FrequencyEqualizer::truncated(ch, beta, n, with_direct), 1.0, blocks.size(), n};
    }
    case Scheme::hd_fdd: {
      CVec s = standard_cp_frame(blocks);
      s.push_back({});
      const Complex gain = hd_fdd_gain(ch) * ch.h_sr * ch.h_rd;
      return {scheme, std::move(s), FrequencyEqualizer::flat(gain, n), 1.0, blocks.size(), n};
    }
  }
  throw InvalidInput("unknown scheme");
}

/// Equalized frequency-domain blocks for one pass through the link.
std::vector<CVec> run_chain(const Chain& chain, const ChannelRealization& ch, double beta, const NoiseStreams* noise,
                            bool with_direct) {
  const LinkOutput out = chain.scheme == Scheme::hd_fdd ? simulate_hd_fdd(chain.stream, ch, noise)
                                                        : simulate_fd_link(chain.stream, ch, beta, noise, with_direct);
  const std::vector<CVec> yblocks = extract_blocks(out.y, chain.n, chain.blocks, out.delay_offset);
  std::vector<CVec> freq;
  freq.reserve(yblocks.size());
  for (const auto& yb : yblocks) freq.push_back(chain.eq.apply_freq(yb));
  return freq;
}

std::vector<double> log_alpha_grid(std::size_t points, double lo, double hi) {
  std::vector<double> g(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  return g;
}

Complex default_rsi_gain(double rsi_db) { return {std::sqrt(db_to_linear(rsi_db)), 0.0}; }

}  // namespace

const BerRecord* SweepResult::find(Scheme s, double sweep_value) const {
  for (const auto& r : records)
    if (r.scheme == s && r.sweep_value == sweep_value) return &r;
  return nullptr;
}

MeasuredSnr measure_snr(Scheme scheme, const ChannelRealization& ch, double beta, std::size_t n, std::size_t blocks,
                        std::size_t frames, std::uint64_t seed, bool with_direct, unsigned threads) {
  if (frames == 0 || blocks == 0) throw InvalidInput("measure_snr needs at least one frame and one block");
  struct Sums {
    double signal = 0.0, noise = 0.0, error = 0.0;
  };
  std::vector<Sums> per_frame(frames);
  const Constellation& c = constellation_for(scheme, Modulation::qpsk);

  detail::parallel_for(frames, threads, [&](std::size_t f) {
    Rng data_rng(seed + f, kDataStream);
    const Bits bits = random_bits(data_rng, blocks * n * c.bits_per_symbol());
    const std::vector<SymbolBlock> sym = map_bits(bits, c, n);
    const Chain chain = build_chain(scheme, ch, beta, sym, with_direct);

    Rng noise_rng(seed + f, kNoiseStream);
    const NoiseStreams ns = draw_noise(noise_rng, chain.stream.size(), ch.sigma2_R, ch.sigma2_D);
    const auto noisy = run_chain(chain, ch, beta, &ns, with_direct);
    const auto clean = run_chain(chain, ch, beta, nullptr, with_direct);

    const double amp = symbol_amplitude(n, chain.symbol_power);
    Sums s;
    for (std::size_t i = 0; i < blocks; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const Complex ref = amp * sym[i][k];
        s.signal += std::norm(ref);
        s.noise += std::norm(noisy[i][k] - clean[i][k]);
        s.error += std::norm(noisy[i][k] - ref);
      }
    }
    per_frame[f] = s;
  });

  Sums total;
  for (const auto& s : per_frame) {
    total.signal += s.signal;
    total.noise += s.noise;
    total.error += s.error;
  }
  MeasuredSnr m;
  m.samples = static_cast<std::uint64_t>(frames) * blocks * n;
  // Parseval: frequency-domain energy / N is time-domain energy
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(m.samples));
  m.signal_power = total.signal * scale;
  m.noise_power = total.noise * scale;
  m.error_power = total.error * scale;
  return m;
}

FrameTrace simulate_frame(Scheme scheme, const ChannelRealization& ch, double beta, std::size_t n, std::size_t blocks,
                          std::uint64_t seed, bool with_direct, bool noiseless) {
  if (blocks == 0) throw InvalidInput("simulate_frame needs at least one block");
  const Constellation& c = constellation_for(scheme, Modulation::qpsk);
  Rng data_rng(seed, kDataStream);
  const Bits bits = random_bits(data_rng, blocks * n * c.bits_per_symbol());
  const Chain chain = build_chain(scheme, ch, beta, map_bits(bits, c, n), with_direct);

  FrameTrace t;
  t.tx = chain.stream;
  t.symbol_power = chain.symbol_power;
  NoiseStreams ns;
  if (!noiseless) {
    Rng noise_rng(seed, kNoiseStream);
    ns = draw_noise(noise_rng, chain.stream.size(), ch.sigma2_R, ch.sigma2_D);
  }
  const NoiseStreams* np = noiseless ? nullptr : &ns;
  const LinkOutput out = scheme == Scheme::hd_fdd ? simulate_hd_fdd(chain.stream, ch, np)
                                                  : simulate_fd_link(chain.stream, ch, beta, np, with_direct);
  t.y = out.y;
  for (const auto& yb : extract_blocks(out.y, n, blocks, out.delay_offset)) t.equalized.push_back(chain.eq.apply_freq(yb));
  t.ber = demap_and_count(t.equalized, bits, c, chain.symbol_power);
  t.ber.scheme = scheme;
  return t;
}

double cp_ofdm_pilot_beta(const ChannelRealization& ch, const SimConfig& cfg, bool with_direct,
                          std::uint64_t trial_seed) {
  if (std::abs(ch.h_rr) == 0.0) return std::sqrt(cfg.gain_search.beta2_cap);

  const std::size_t n = cfg.n;
  const Constellation& c = Constellation::get(cfg.constellation);
  Rng data_rng(trial_seed, kPilotDataStream);
  Rng noise_rng(trial_seed, kPilotNoiseStream);
  std::vector<std::vector<SymbolBlock>> pilots;
  std::vector<NoiseStreams> noise;
  const std::size_t stream_len = cfg.pilot_blocks * (n + 1) + 1;
  for (std::size_t f = 0; f < cfg.pilot_frames; ++f) {
    pilots.push_back(map_bits(random_bits(data_rng, cfg.pilot_blocks * n * c.bits_per_symbol()), c, n));
    noise.push_back(draw_noise(noise_rng, stream_len, ch.sigma2_R, ch.sigma2_D));
  }

  const double amp = symbol_amplitude(n, 1.0);
  double best_beta = 0.0;
  double best_sinr = -1.0;
  for (double alpha : log_alpha_grid(cfg.cp_gain_grid, cfg.gain_search.alpha_margin, 0.99)) {
    const double beta = beta_from_alpha(alpha, ch.h_rr);
    double signal = 0.0;
    double error = 0.0;
    try {
      for (std::size_t f = 0; f < cfg.pilot_frames; ++f) {
        const Chain chain = build_chain(Scheme::cp_ofdm, ch, beta, pilots[f], with_direct);
        const auto freq = run_chain(chain, ch, beta, &noise[f], with_direct);
        for (std::size_t i = 0; i < freq.size(); ++i)
          for (std::size_t k = 0; k < n; ++k) {
            const Complex ref = amp * pilots[f][i][k];
            signal += std::norm(ref);
            error += std::norm(freq[i][k] - ref);
          }
      }
    } catch (const SingularSubcarrier&) {
      continue;
    }
    const double sinr = signal / error;
    if (sinr > best_sinr) {
      best_sinr = sinr;
      best_beta = beta;
    }
  }
  if (best_sinr < 0.0) throw SingularSubcarrier("no usable gain for the truncated equalizer", 0);
  return best_beta;
}

double select_beta(Scheme scheme, const ChannelRealization& ch, const SimConfig& cfg, bool with_direct,
                   std::uint64_t trial_seed) {
  if (scheme == Scheme::hd_fdd) return hd_fdd_gain(ch);
  switch (cfg.beta_policy.kind) {
    case BetaPolicy::Kind::fixed: return std::sqrt(cfg.beta_policy.value);
    case BetaPolicy::Kind::sweep: return std::sqrt(cfg.beta_policy.values.front());
    case BetaPolicy::Kind::optimized: break;
  }
  switch (scheme) {
    case Scheme::proposed: return optimize_gain(ch, cfg.n, cfg.gain_search).beta_star;
    case Scheme::prefilter: return optimize_prefilter_gain(ch, cfg.gain_search).beta_star;
    case Scheme::cp_ofdm: return cp_ofdm_pilot_beta(ch, cfg, with_direct, trial_seed);
    case Scheme::hd_fdd: break;
  }
  return hd_fdd_gain(ch);
}

std::vector<BerRecord> run_ber_point(const SimConfig& cfg, double snr_c_db, double rsi_db, bool with_direct) {
  cfg.validate();
  const ChannelConfig ccfg = ChannelConfig::from_db(snr_c_db, rsi_db, with_direct ? cfg.direct_pathloss_db : -1.0);
  const std::size_t n = cfg.n;
  const std::size_t m = cfg.blocks_per_frame;
  const std::size_t schemes = cfg.schemes.size();

  std::vector<ChannelRealization> channels;
  channels.reserve(cfg.frames);
  for (std::size_t t = 0; t < cfg.frames; ++t) {
    Rng chan_rng(cfg.seed + t, kChannelStream);
    channels.push_back(draw_channels(chan_rng, ccfg));
  }
  // Reject gains that would destabilise any trial before simulating.
  if (cfg.beta_policy.kind != BetaPolicy::Kind::optimized)
    for (const auto& ch : channels)
      for (Scheme s : cfg.schemes)
        if (s != Scheme::hd_fdd) require_stable(select_beta(s, ch, cfg, with_direct, cfg.seed), ch.h_rr);

  struct Outcome {
    std::vector<std::uint64_t> bits, errors;
  };
  std::vector<Outcome> outcomes(cfg.frames);

  detail::parallel_for(cfg.frames, cfg.threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = cfg.seed + t;
    const ChannelRealization& ch = channels[t];

    Rng data_rng(trial_seed, kDataStream);
    Rng data16_rng(trial_seed, kDataStream16);
    const Constellation& fd = Constellation::get(cfg.constellation);
    const Bits fd_bits = random_bits(data_rng, m * n * fd.bits_per_symbol());
    const Bits hd_bits = random_bits(data16_rng, m * n * Constellation::qam16().bits_per_symbol());

    Rng noise_rng(trial_seed, kNoiseStream);
    const NoiseStreams noise = draw_noise(noise_rng, m * (n + 1) + 1, ch.sigma2_R, ch.sigma2_D);

    Outcome o{std::vector<std::uint64_t>(schemes, 0), std::vector<std::uint64_t>(schemes, 0)};
    for (std::size_t si = 0; si < schemes; ++si) {
      const Scheme s = cfg.schemes[si];
      const Constellation& c = constellation_for(s, cfg.constellation);
      const Bits& bits = s == Scheme::hd_fdd ? hd_bits : fd_bits;
      const std::vector<SymbolBlock> blocks = map_bits(bits, c, n);
      const double beta = select_beta(s, ch, cfg, with_direct, trial_seed);
      const Chain chain = build_chain(s, ch, beta, blocks, with_direct);
      const auto freq = run_chain(chain, ch, beta, &noise, with_direct);
      const BerRecord rec = demap_and_count(freq, bits, c, chain.symbol_power);
      o.bits[si] = rec.bits;
      o.errors[si] = rec.errors;
    }
    outcomes[t] = std::move(o);
  });

  std::vector<BerRecord> records(schemes);
  for (std::size_t si = 0; si < schemes; ++si) {
    records[si].scheme = cfg.schemes[si];
    for (const auto& o : outcomes) records[si].add(o.bits[si], o.errors[si]);
  }
  return records;
}

namespace {

SweepResult ber_sweep(const SimConfig& cfg, bool sweep_rsi, bool with_direct) {
  cfg.validate();
  SweepResult r;
  r.sweep_name = sweep_rsi ? "rsi_db" : "snr_c_db";
  const auto& values = sweep_rsi ? cfg.rsi_db : cfg.snr_c_db;
  for (double v : values) {
    const double snr = sweep_rsi ? cfg.snr_c_db.front() : v;
    const double rsi = sweep_rsi ? v : cfg.rsi_db.front();
    for (auto rec : run_ber_point(cfg, snr, rsi, with_direct)) {
      rec.sweep_value = v;
      r.records.push_back(rec);
    }
  }
  r.metadata = cfg.describe();
  r.metadata.emplace_back("with_direct", with_direct ? "true" : "false");
  r.metadata.emplace_back("version", version_string());
  return r;
}

}  // namespace

SweepResult run_fig2(const SimConfig& cfg) {
  cfg.validate();
  const FixedChannel fixed = cfg.channel.value_or(FixedChannel{{1.0, 0.0}, {1.0, 0.0}, default_rsi_gain(cfg.rsi_db.front())});
  ChannelRealization ch;
  ch.h_sr = fixed.h_sr;
  ch.h_rd = fixed.h_rd;
  ch.h_rr = fixed.h_rr;
  ch.sigma2_R = db_to_linear(-cfg.snr_c_db.front());
  ch.sigma2_D = ch.sigma2_R;
  const double rr2 = std::norm(ch.h_rr);
  if (rr2 == 0.0) throw DegenerateChannel("the gain sweep needs h_rr != 0");

  std::vector<double> beta2;
  if (cfg.beta_policy.kind == BetaPolicy::Kind::sweep) {
    beta2 = cfg.beta_policy.values;
  } else {
    for (std::size_t i = 1; i <= cfg.gain_grid; ++i)
      beta2.push_back(static_cast<double>(i) / static_cast<double>(cfg.gain_grid + 1) / rr2);
  }
  for (double b2 : beta2) require_stable(std::sqrt(b2), ch.h_rr);

  const std::size_t per_frame = cfg.blocks_per_frame * cfg.n;
  const std::size_t frames = (cfg.min_samples + per_frame - 1) / per_frame;

  SweepResult r;
  r.sweep_name = "beta2";
  for (double b2 : beta2) {
    const double beta = std::sqrt(b2);
    const LinkBudget lb = budget(ch, beta, cfg.n);
    GainPoint p;
    p.beta2 = b2;
    p.alpha = lb.alpha;
    p.gamma_db_analytic = linear_to_db(lb.gamma);
    p.gamma_pre_db_analytic = linear_to_db(lb.gamma_pre);
    p.gamma_db_measured = linear_to_db(
        measure_snr(Scheme::proposed, ch, beta, cfg.n, cfg.blocks_per_frame, frames, cfg.seed, false, cfg.threads).snr());
    p.gamma_pre_db_measured = linear_to_db(
        measure_snr(Scheme::prefilter, ch, beta, cfg.n, cfg.blocks_per_frame, frames, cfg.seed, false, cfg.threads).snr());
    r.gain_points.push_back(p);
  }

  const GainSolution opt = optimize_gain(ch, cfg.n, cfg.gain_search);
  const double opt_b2 = opt.beta_star * opt.beta_star;
  auto nearest = std::min_element(r.gain_points.begin(), r.gain_points.end(), [&](const auto& x, const auto& y) {
    return std::abs(x.beta2 - opt_b2) < std::abs(y.beta2 - opt_b2);
  });
  if (nearest != r.gain_points.end()) nearest->optimum = true;

  r.metadata = cfg.describe();
  r.metadata.emplace_back("frames_per_point", std::to_string(frames));
  r.metadata.emplace_back("alpha_star", format_number(opt.alpha_star.value_or(std::numeric_limits<double>::quiet_NaN())));
  r.metadata.emplace_back("beta2_star", format_number(opt_b2));
  r.metadata.emplace_back("gamma_star_db", format_number(linear_to_db(opt.gamma_star)));
  r.metadata.emplace_back("version", version_string());
  return r;
}

SweepResult run_fig3(const SimConfig& cfg) { return ber_sweep(cfg, false, false); }
SweepResult run_fig4(const SimConfig& cfg) { return ber_sweep(cfg, false, true); }
SweepResult run_fig5(const SimConfig& cfg) { return ber_sweep(cfg, true, false); }

}  // namespace iirrelay
