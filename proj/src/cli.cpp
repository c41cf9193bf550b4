#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "iirrelay/fdrelay.hpp"
#include "iirrelay/harness.hpp"
#include "text_util.hpp"

namespace iirrelay {

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string seed, schemes, frames, snr_c, rsi, threads, n, blocks, beta_policy, constellation;
  std::string gain_grid, min_samples, pathloss;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "key = value configuration file");
  sub->add_option("--out", f.out, "CSV output path (metadata goes to <path>.meta)");
  sub->add_option("--seed", f.seed, "base seed");
  sub->add_option("--schemes", f.schemes, "comma-separated: proposed,prefilter,cp_ofdm,hd_fdd");
  sub->add_option("--frames", f.frames, "channel draws per sweep point");
  sub->add_option("--snr-c", f.snr_c, "per-hop SNR in dB (comma list)");
  sub->add_option("--rsi", f.rsi, "residual self-interference power in dB (comma list)");
  sub->add_option("--threads", f.threads, "worker threads, 0 = all cores");
  sub->add_option("--n", f.n, "subcarriers");
  sub->add_option("--blocks", f.blocks, "OFDM blocks per frame");
  sub->add_option("--beta-policy", f.beta_policy, "optimized | fixed:<beta2> | sweep:<b1>,<b2>,...");
  sub->add_option("--constellation", f.constellation, "qpsk or qam16");
}

SimConfig build_config(Figure fig, const CommonFlags& f) {
  SimConfig cfg = SimConfig::defaults(fig);
  if (!f.config.empty()) cfg.load(f.config);
  const std::pair<const char*, const std::string*> overrides[] = {
      {"seed", &f.seed},       {"schemes", &f.schemes}, {"frames", &f.frames},
      {"snr_c_db", &f.snr_c},  {"rsi_db", &f.rsi},      {"threads", &f.threads},
      {"n", &f.n},             {"blocks_per_frame", &f.blocks}, {"beta_policy", &f.beta_policy},
      {"constellation", &f.constellation}, {"gain_grid", &f.gain_grid}, {"min_samples", &f.min_samples},
      {"direct_pathloss_db", &f.pathloss},
  };
  for (const auto& [key, value] : overrides)
    if (!value->empty()) cfg.set(key, *value);
  cfg.validate();
  return cfg;
}

void emit(const SweepResult& r, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_csv(out, r);
    return;
  }
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw InvalidInput("cannot write " + path);
  write_csv(csv, r);
  std::ofstream meta(path + ".meta", std::ios::binary);
  if (!meta) throw InvalidInput("cannot write " + path + ".meta");
  write_metadata(meta, r);
}

struct ChannelFlags {
  std::string h_sr = "1", h_rd = "1", h_rr, h_sd = "0";
  double snr_c = 10.0;
  double rsi = -15.0;
};

void add_channel(CLI::App* sub, ChannelFlags& c) {
  sub->add_option("--h-sr", c.h_sr, "source-relay gain, re or (re,im)");
  sub->add_option("--h-rd", c.h_rd, "relay-destination gain");
  sub->add_option("--h-rr", c.h_rr, "residual loop gain (default from --rsi)");
  sub->add_option("--h-sd", c.h_sd, "direct-link gain");
  sub->add_option("--snr-c", c.snr_c, "per-hop SNR in dB");
  sub->add_option("--rsi", c.rsi, "residual self-interference power in dB when --h-rr is absent");
}

ChannelRealization fixed_channel(const ChannelFlags& c) {
  ChannelRealization ch;
  ch.h_sr = detail::parse_complex(c.h_sr, "h_sr");
  ch.h_rd = detail::parse_complex(c.h_rd, "h_rd");
  ch.h_rr = c.h_rr.empty() ? Complex{std::sqrt(db_to_linear(c.rsi)), 0.0} : detail::parse_complex(c.h_rr, "h_rr");
  ch.h_sd = detail::parse_complex(c.h_sd, "h_sd");
  if (!std::isfinite(c.snr_c)) throw InvalidInput("snr_c must be finite");
  ch.sigma2_R = db_to_linear(-c.snr_c);
  ch.sigma2_D = ch.sigma2_R;
  return ch;
}

void print_kv(std::ostream& os, const char* key, double v) { os << key << " = " << format_number(v) << '\n'; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Full-duplex AF relay OFDM link simulator"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  CommonFlags common[4];
  const Figure figs[4] = {Figure::gain_sweep, Figure::ber_no_direct, Figure::ber_direct, Figure::ber_rsi};
  const char* fig_help[4] = {"SNR versus relay power gain", "BER versus SNR without direct link",
                             "BER versus SNR with direct link", "BER versus residual self-interference"};
  CLI::App* fig_cmds[4];
  for (int i = 0; i < 4; ++i) {
    fig_cmds[i] = app.add_subcommand("fig" + std::to_string(i + 2), fig_help[i]);
    add_common(fig_cmds[i], common[i]);
  }
  fig_cmds[0]->add_option("--gain-grid", common[0].gain_grid, "power-gain grid points");
  fig_cmds[0]->add_option("--min-samples", common[0].min_samples, "samples per grid point");
  fig_cmds[2]->add_option("--pathloss", common[2].pathloss, "direct-link path loss in dB");

  auto* opt = app.add_subcommand("optimize-gain", "optimal relay gain for one channel");
  ChannelFlags opt_ch;
  std::size_t opt_n = 128;
  add_channel(opt, opt_ch);
  opt->add_option("--n", opt_n, "subcarriers");

  auto* bud = app.add_subcommand("budget", "noise and SNR budget at one gain");
  ChannelFlags bud_ch;
  std::size_t bud_n = 128;
  double bud_alpha = 0.0, bud_beta = 0.0;
  add_channel(bud, bud_ch);
  bud->add_option("--n", bud_n, "subcarriers");
  auto* a_opt = bud->add_option("--alpha", bud_alpha, "|beta h_rr|^2");
  auto* b_opt = bud->add_option("--beta", bud_beta, "amplitude gain");
  a_opt->excludes(b_opt);

  auto* sim = app.add_subcommand("simulate", "one scheme on a fixed channel");
  ChannelFlags sim_ch;
  std::string sim_scheme = "proposed", sim_dump, sim_seed = "1";
  double sim_beta2 = 0.0;
  std::size_t sim_n = 128, sim_blocks = 50, sim_frames = 20;
  bool sim_direct = false;
  add_channel(sim, sim_ch);
  sim->add_option("--scheme", sim_scheme, "proposed, prefilter, cp_ofdm or hd_fdd");
  auto* beta2_opt = sim->add_option("--beta2", sim_beta2, "power gain (default: optimized)");
  sim->add_flag("--direct", sim_direct, "combine the direct link");
  sim->add_option("--n", sim_n, "subcarriers");
  sim->add_option("--blocks", sim_blocks, "blocks per frame");
  sim->add_option("--frames", sim_frames, "frames for the SNR measurement");
  sim->add_option("--seed", sim_seed, "seed");
  sim->add_option("--dump", sim_dump, "write frame 0 received samples (float64 re/im)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    for (int i = 0; i < 4; ++i) {
      if (!fig_cmds[i]->parsed()) continue;
      const SimConfig cfg = build_config(figs[i], common[i]);
      SweepResult r;
      switch (figs[i]) {
        case Figure::gain_sweep: r = run_fig2(cfg); break;
        case Figure::ber_no_direct: r = run_fig3(cfg); break;
        case Figure::ber_direct: r = run_fig4(cfg); break;
        case Figure::ber_rsi: r = run_fig5(cfg); break;
      }
      emit(r, common[i].out, out);
      return 0;
    }

    if (opt->parsed()) {
      const ChannelRealization ch = fixed_channel(opt_ch);
      const GainSolution s = optimize_gain(ch, opt_n);
      if (s.alpha_star)
        print_kv(out, "alpha_star", *s.alpha_star);
      else
        out << "alpha_star = none\n";
      print_kv(out, "beta_star", s.beta_star);
      print_kv(out, "beta2_star", s.beta_star * s.beta_star);
      print_kv(out, "gamma_star_db", linear_to_db(s.gamma_star));
      return 0;
    }

    if (bud->parsed()) {
      const ChannelRealization ch = fixed_channel(bud_ch);
      double beta = bud_beta;
      if (a_opt->count()) {
        if (!(bud_alpha > 0.0 && bud_alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
        beta = beta_from_alpha(bud_alpha, ch.h_rr);
      } else if (!b_opt->count()) {
        throw InvalidInput("budget needs --alpha or --beta");
      }
      require_stable(beta, ch.h_rr);
      const LinkBudget b = budget(ch, beta, bud_n);
      print_kv(out, "alpha", b.alpha);
      print_kv(out, "beta", b.beta);
      print_kv(out, "P_D", b.P_D);
      print_kv(out, "P_R1", b.P_R1);
      print_kv(out, "P_n", b.P_n);
      print_kv(out, "P_R2", b.P_R2);
      print_kv(out, "P_R", b.P_R);
      print_kv(out, "P_y", b.P_y);
      print_kv(out, "P_GI", b.P_GI);
      print_kv(out, "sigma_x2", b.sigma_x2);
      print_kv(out, "eta", b.eta);
      print_kv(out, "gamma_db", linear_to_db(b.gamma));
      print_kv(out, "gamma_pre_db", linear_to_db(b.gamma_pre));
      print_kv(out, "delta", b.delta);
      out << "degenerate = " << (b.degenerate ? "true" : "false") << '\n';
      return 0;
    }

    if (sim->parsed()) {
      const ChannelRealization ch = fixed_channel(sim_ch);
      const Scheme scheme = parse_scheme(sim_scheme);
      const std::uint64_t seed = detail::parse_uint(sim_seed, "seed");
      SimConfig cfg;
      cfg.n = sim_n;
      cfg.seed = seed;
      if (beta2_opt->count()) cfg.beta_policy = BetaPolicy::parse("fixed:" + format_number(sim_beta2));
      const double beta = select_beta(scheme, ch, cfg, sim_direct, seed);
      if (scheme != Scheme::hd_fdd) require_stable(beta, ch.h_rr);
      const MeasuredSnr m = measure_snr(scheme, ch, beta, sim_n, sim_blocks, sim_frames, seed, sim_direct);
      const FrameTrace t = simulate_frame(scheme, ch, beta, sim_n, sim_blocks, seed, sim_direct);
      if (!sim_dump.empty()) dump_stream(sim_dump, t.y);
      out << "scheme = " << to_string(scheme) << '\n';
      print_kv(out, "beta2", beta * beta);
      print_kv(out, "alpha", std::norm(beta * ch.h_rr));
      print_kv(out, "snr_db", linear_to_db(m.snr()));
      print_kv(out, "sinr_db", linear_to_db(m.sinr()));
      if (scheme == Scheme::proposed && !sim_direct) print_kv(out, "gamma_db_analytic", linear_to_db(budget(ch, beta, sim_n).gamma));
      out << "frame0_bits = " << t.ber.bits << '\n' << "frame0_errors = " << t.ber.errors << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace iirrelay
