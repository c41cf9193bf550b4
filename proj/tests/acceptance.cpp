// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "iirrelay/channel.hpp"
#include "iirrelay/errors.hpp"
#include "iirrelay/fdrelay.hpp"
#include "iirrelay/harness.hpp"
#include "iirrelay/linkbudget.hpp"
#include "iirrelay/receiver.hpp"
#include "iirrelay/txchain.hpp"

using namespace iirrelay;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Bits random_bits(Rng& rng, std::size_t n) {
  Bits b(n);
  for (auto& v : b) v = rng.bit();
  return b;
}

/// Random stable (channel, beta) pair with alpha uniform in [0.05, 0.95].
std::pair<ChannelRealization, double> random_pair(Rng& rng, bool direct) {
  const auto ch = draw_channels(rng, ChannelConfig::from_db(10.0, -15.0, direct ? 10.0 : -1.0));
  const double alpha = 0.05 + 0.9 * rng.uniform();
  return {ch, beta_from_alpha(alpha, ch.h_rr)};
}

Outcome loopback(bool direct) {
  Rng rng(direct ? 202 : 101);
  const std::size_t n = 128, m = 50;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto [ch, beta] = random_pair(rng, direct);
    const auto c = compute_coeffs(ch, beta);
    const double alpha = std::norm(beta * ch.h_rr);
    const auto blocks = map_bits(random_bits(rng, m * n * 2), Constellation::qpsk(), n);
    auto frame = precode_frame(blocks, c.a0, c.a1, alpha);
    frame.stream.push_back({});
    const auto out = simulate_fd_link(frame.stream, ch, beta, nullptr, direct);
    const auto eq = direct ? FrequencyEqualizer::mixed(c, n) : FrequencyEqualizer::iir(c, n);
    const double inv = 1.0 / symbol_amplitude(n, frame.sigma_x2);
    const auto yb = extract_blocks(out.y, n, m, out.delay_offset);
    for (std::size_t i = 0; i < m; ++i) {
      const CVec x = eq.apply_freq(yb[i]);
      for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(x[k] * inv - blocks[i][k]));
    }
  }
  return {worst < 1e-9, fmt("max symbol error %.3g over 100 channels x 50 blocks", worst)};
}

Outcome cp_structure() {
  Rng rng(303);
  const std::size_t n = 128, m = 50;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto [ch, beta] = random_pair(rng, false);
    const auto c = compute_coeffs(ch, beta);
    const auto blocks = map_bits(random_bits(rng, m * n * 2), Constellation::qpsk(), n);
    auto frame = precode_frame(blocks, c.a0, c.a1, std::norm(beta * ch.h_rr));
    frame.stream.push_back({});
    const auto out = simulate_fd_link(frame.stream, ch, beta, nullptr, false);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t gi = out.delay_offset + i * (n + 1);
      worst = std::max(worst, std::abs(out.y[gi] - out.y[gi + n]));
    }
  }
  return {worst < 1e-10, fmt("max |ybar - y_{N-1}| = %.3g", worst)};
}

Outcome snr_agreement(Scheme scheme) {
  Rng rng(404);
  const std::size_t n = 128, m = 50;
  const std::size_t frames = (1'000'000 + m * n - 1) / (m * n);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const auto ch = draw_channels(rng, ChannelConfig::from_db(10.0, -15.0));
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double beta = beta_from_alpha(alpha, ch.h_rr);
      const auto b = budget(ch, beta, n);
      const double analytic = scheme == Scheme::proposed ? b.gamma : b.gamma_pre;
      const auto meas = measure_snr(scheme, ch, beta, n, m, frames, 1000 + 10 * t);
      worst = std::max(worst, std::abs(linear_to_db(meas.snr()) - linear_to_db(analytic)));
    }
  }
  return {worst <= 0.2, fmt("max |analytic - measured| = %.3f dB over 25 points, %.0f samples each", worst,
                            double(frames * m * n))};
}

Outcome gain_sweep() {
  SimConfig cfg = SimConfig::defaults(Figure::gain_sweep);
  const auto r = run_fig2(cfg);
  bool above = true;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < r.gain_points.size(); ++i) {
    const auto& p = r.gain_points[i];
    above = above && p.gamma_db_analytic >= p.gamma_pre_db_analytic && p.gamma_db_measured >= p.gamma_pre_db_measured;
    if (p.gamma_db_measured > r.gain_points[arg].gamma_db_measured) arg = i;
  }
  double beta2_star = 0.0;
  for (const auto& [k, v] : r.metadata)
    if (k == "beta2_star") beta2_star = std::stod(v);
  const double step = r.gain_points[1].beta2 - r.gain_points[0].beta2;
  const double dist = std::abs(beta2_star - r.gain_points[arg].beta2);
  return {above && dist <= step, std::string("gamma >= gamma_pre at every point: ") + (above ? "yes" : "no") +
                                     fmt("; |beta2* - empirical argmax| = %.3f (grid step %.3f)", dist, step)};
}

Outcome delta_sign() {
  Rng rng(505);
  int mismatches = 0;
  int negatives = 0;
  int mixed_signs = 0;
  for (std::size_t n : {32u, 128u, 512u}) {
    int pos = 0;
    for (int i = 0; i < 1000; ++i) {
      const double alpha = 1e-3 + (1 - 2e-3) * rng.uniform();
      const double eta = std::pow(10.0, -4 + 5 * rng.uniform());
      const double p_r1 = std::pow(10.0, -4 + 5 * rng.uniform());
      const double gap = gamma_closed_form(alpha, eta, p_r1, n) - gamma_pre_closed_form(alpha, eta, p_r1);
      const double poly = delta_poly(alpha, eta, p_r1, n);
      mismatches += (gap > 0) != (poly > 0);
      pos += gap > 0;
    }
    mixed_signs += pos > 0 && pos < 1000;
  }
  for (int i = 0; i < 1000; ++i) {
    const double alpha = 0.05 + 0.9 * rng.uniform();
    const double p_r1 = std::pow(10.0, -4 + 4 * rng.uniform());
    const double eta = p_r1 * rng.uniform();
    if (!(gamma_closed_form(alpha, eta, p_r1, 128) > gamma_pre_closed_form(alpha, eta, p_r1))) ++negatives;
  }
  return {mismatches == 0 && negatives == 0,
          fmt("%.0f sign mismatches in 3000 points (%.0f of 3 sizes with both signs present); %.0f non-positive gaps at N = 128",
              mismatches, mixed_signs, negatives)};
}

double combined_sigma(const BerRecord& a, const BerRecord& b) { return std::sqrt(a.sigma() * a.sigma() + b.sigma() * b.sigma()); }

std::string ber_line(const SweepResult& r, const std::vector<double>& pts, const std::vector<Scheme>& schemes) {
  std::string s;
  for (double v : pts) {
    s += fmt(" | %g:", v);
    for (Scheme sc : schemes) s += std::string(" ") + std::string(to_string(sc)) + "=" + fmt("%.3g", r.find(sc, v)->ber);
  }
  return s;
}

Outcome fig3_trend(std::size_t frames) {
  SimConfig cfg = SimConfig::defaults(Figure::ber_no_direct);
  cfg.frames = frames;
  cfg.schemes = {Scheme::proposed, Scheme::prefilter, Scheme::cp_ofdm};
  const auto r = run_fig3(cfg);
  bool ok = true;
  for (double v : cfg.snr_c_db) {
    const auto* p = r.find(Scheme::proposed, v);
    const auto* f = r.find(Scheme::prefilter, v);
    const auto* c = r.find(Scheme::cp_ofdm, v);
    ok = ok && p->bits >= 100'000 && f->ber - p->ber > 3 * combined_sigma(*p, *f) && c->ber - f->ber > 3 * combined_sigma(*f, *c);
  }
  return {ok, fmt("%.0f draws/point", double(frames)) + ber_line(r, cfg.snr_c_db, cfg.schemes)};
}

Outcome fig4_trend(std::size_t frames) {
  SimConfig cfg = SimConfig::defaults(Figure::ber_direct);
  cfg.frames = frames;
  cfg.schemes = {Scheme::proposed, Scheme::cp_ofdm};
  const auto r = run_fig4(cfg);
  const auto* p10 = r.find(Scheme::proposed, 10);
  const auto* p20 = r.find(Scheme::proposed, 20);
  const auto* p30 = r.find(Scheme::proposed, 30);
  const auto* c20 = r.find(Scheme::cp_ofdm, 20);
  const auto* c30 = r.find(Scheme::cp_ofdm, 30);
  const bool decreasing = p10->ber - p20->ber > 3 * combined_sigma(*p10, *p20) &&
                          p20->ber - p30->ber > 3 * combined_sigma(*p20, *p30) && p30->errors > 0;
  const double rp = p20->ber / p30->ber;
  const double rc = c30->ber > 0 ? c20->ber / c30->ber : INFINITY;
  return {decreasing && rc < rp, fmt("20->30 dB improvement: proposed %.3gx, cp_ofdm %.3gx", rp, rc) +
                                     ber_line(r, cfg.snr_c_db, cfg.schemes)};
}

Outcome fig5_trend(std::size_t frames) {
  SimConfig cfg = SimConfig::defaults(Figure::ber_rsi);
  cfg.frames = frames;
  cfg.schemes = {Scheme::proposed, Scheme::cp_ofdm};
  const auto r = run_fig5(cfg);
  bool monotone = true;
  for (std::size_t i = 1; i < cfg.rsi_db.size(); ++i) {
    const auto* a = r.find(Scheme::proposed, cfg.rsi_db[i - 1]);
    const auto* b = r.find(Scheme::proposed, cfg.rsi_db[i]);
    monotone = monotone && b->ber >= a->ber - 3 * combined_sigma(*a, *b);
  }
  const double dp = r.find(Scheme::proposed, 0.0)->ber / r.find(Scheme::proposed, -30.0)->ber;
  const double dc = r.find(Scheme::cp_ofdm, 0.0)->ber / r.find(Scheme::cp_ofdm, -30.0)->ber;
  return {monotone && dp < dc, fmt("degradation 0 dB / -30 dB: proposed %.3gx, cp_ofdm %.3gx", dp, dc) +
                                   ber_line(r, cfg.rsi_db, cfg.schemes)};
}

Outcome power_normalization() {
  Rng rng(606);
  const std::size_t n = 128, m = 1000;
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto ch = draw_channels(rng, ChannelConfig::from_db(10.0, -15.0));
    const auto blocks = map_bits(random_bits(rng, m * n * 2), Constellation::qpsk(), n);
    const auto opt = optimize_gain(ch, n);
    const auto c = compute_coeffs(ch, opt.beta_star);
    const auto frame = precode_frame(blocks, c.a0, c.a1, *opt.alpha_star);
    worst = std::max(worst, std::abs(mean_power(frame.stream) - 1.0));
    const auto pre = optimize_prefilter_gain(ch);
    const auto cp = compute_coeffs(ch, pre.beta_star);
    worst = std::max(worst, std::abs(mean_power(prefilter_frame(blocks, cp.a0, cp.a1)) - 1.0));
  }
  return {worst < 0.01, fmt("max |P - 1| = %.4f over 10 channels x 2 transmitters, %.0f blocks each", worst, double(m))};
}

Outcome stability_guard() {
  ChannelRealization ch;
  ch.h_rr = 0.25;
  const double edge = (1.0 - kStabilityGuard) / 0.25;
  int rejected = 0, total = 0;
  auto expect = [&](const std::function<void()>& f) {
    ++total;
    try {
      f();
    } catch (const StabilityError&) {
      ++rejected;
    }
  };
  for (double beta : {edge, 4.0, 10.0}) {
    expect([&] { compute_coeffs(ch, beta); });
    expect([&] { simulate_fd_link(CVec(8), ch, beta, nullptr, false); });
    expect([&] { budget(ch, beta, 128); });
  }
  SimConfig cfg = SimConfig::defaults(Figure::ber_no_direct);
  cfg.snr_c_db = {10};
  cfg.frames = 50;
  cfg.beta_policy = BetaPolicy::parse("fixed:400");
  const auto t0 = std::chrono::steady_clock::now();
  expect([&] { run_fig3(cfg); });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  SimConfig g = SimConfig::defaults(Figure::gain_sweep);
  g.beta_policy = BetaPolicy::parse("sweep:1,1e4");
  expect([&] { run_fig2(g); });
  const bool inside_ok = is_stable(edge * (1 - 1e-6), ch.h_rr);
  return {rejected == total && inside_ok && secs < 1.0,
          fmt("%.0f of %.0f unstable configurations rejected; sweep rejection took %.3f s", rejected, total, secs)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::size_t ber_frames = 500;
  const std::vector<Criterion> criteria{
      {1, "noiseless loopback, no direct link", [] { return loopback(false); }},
      {2, "noiseless loopback, direct link", [] { return loopback(true); }},
      {3, "cyclic-prefix structure of the received stream", cp_structure},
      {4, "gamma analytic vs measured", [] { return snr_agreement(Scheme::proposed); }},
      {5, "gamma_pre analytic vs measured", [] { return snr_agreement(Scheme::prefilter); }},
      {6, "SNR vs power gain curve and optimizer marker", gain_sweep},
      {7, "gap sign polynomial", delta_sign},
      {8, "BER ordering without direct link", [&] { return fig3_trend(ber_frames); }},
      {9, "BER with direct link", [&] { return fig4_trend(ber_frames); }},
      {10, "BER vs residual self-interference", [&] { return fig5_trend(ber_frames); }},
      {11, "transmit power normalization", power_normalization},
      {12, "stability guard", stability_guard},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
