#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iirrelay/channel.hpp"
#include "iirrelay/linkbudget.hpp"
#include "iirrelay/receiver.hpp"
#include "iirrelay/txchain.hpp"

namespace iirrelay {

enum class Figure { gain_sweep = 2, ber_no_direct = 3, ber_direct = 4, ber_rsi = 5 };

/// How the relay gain is chosen. Values are power gains beta^2.
struct BetaPolicy {
  enum class Kind { optimized, fixed, sweep };
  Kind kind = Kind::optimized;
  double value = 0.0;
  std::vector<double> values;

  /// "optimized", "fixed:<beta2>" or "sweep:<b1>,<b2>,..."
  static BetaPolicy parse(const std::string& text);
  std::string to_string() const;
};

/// Channel coefficients pinned for the gain sweep (and for `simulate`).
struct FixedChannel {
  Complex h_sr{1.0, 0.0};
  Complex h_rd{1.0, 0.0};
  Complex h_rr{};
};

struct SimConfig {
  std::size_t n = 128;
  std::size_t blocks_per_frame = 50;
  /// Independent channel draws per sweep point (BER runs).
  std::size_t frames = 200;
  Modulation constellation = Modulation::qpsk;
  std::vector<double> snr_c_db{10.0, 20.0, 30.0};
  std::vector<double> rsi_db{-15.0};
  bool direct_link = false;
  double direct_pathloss_db = 10.0;
  std::vector<Scheme> schemes{Scheme::proposed, Scheme::prefilter, Scheme::cp_ofdm, Scheme::hd_fdd};
  std::uint64_t seed = 1;
  BetaPolicy beta_policy;

  std::optional<FixedChannel> channel;
  /// Gain grid size for the SNR-vs-gain sweep and samples per grid point.
  std::size_t gain_grid = 32;
  std::size_t min_samples = 1'000'000;

  /// cp_ofdm gain rule: SINR measured on a short pilot run over a log alpha grid.
  std::size_t pilot_frames = 10;
  std::size_t pilot_blocks = 4;
  std::size_t cp_gain_grid = 32;

  GainSearch gain_search;
  /// 0 = hardware concurrency.
  unsigned threads = 0;

  static SimConfig defaults(Figure f);
  void validate() const;
  /// Set one key from its text form; throws InvalidInput on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Flat key = value text; `#` starts a comment.
  void load(const std::filesystem::path& path);
  std::vector<std::pair<std::string, std::string>> describe() const;
};

/// One point of the SNR-vs-power-gain sweep.
struct GainPoint {
  double beta2 = 0.0;
  double alpha = 0.0;
  double gamma_db_analytic = 0.0;
  double gamma_db_measured = 0.0;
  double gamma_pre_db_analytic = 0.0;
  double gamma_pre_db_measured = 0.0;
  bool optimum = false;
};

struct SweepResult {
  /// "snr_c_db", "rsi_db" or "beta2".
  std::string sweep_name;
  std::vector<BerRecord> records;
  std::vector<GainPoint> gain_points;
  std::vector<std::pair<std::string, std::string>> metadata;

  const BerRecord* find(Scheme s, double sweep_value) const;
};

/// Post-equalization SNR measured by matched-seed subtraction of a noiseless run.
struct MeasuredSnr {
  double signal_power = 0.0;  // mean |X_ref|^2 of the transmitted symbols
  double noise_power = 0.0;   // mean |X_hat(noisy) - X_hat(noiseless)|^2
  double error_power = 0.0;   // mean |X_hat(noisy) - X_ref|^2, noise plus residual ISI
  std::uint64_t samples = 0;
  double snr() const { return signal_power / noise_power; }
  double sinr() const { return signal_power / error_power; }
};

/// Runs `frames` frames of `blocks` blocks for one scheme on a fixed channel.
/// Frame f draws its data and noise from seed + f, so calls with the same seed
/// share random numbers across gains and schemes.
MeasuredSnr measure_snr(Scheme scheme, const ChannelRealization& ch, double beta, std::size_t n, std::size_t blocks,
                        std::size_t frames, std::uint64_t seed, bool with_direct = false, unsigned threads = 0);

/// One frame of one scheme: transmit stream, received stream and equalized blocks.
struct FrameTrace {
  CVec tx;
  CVec y;
  std::vector<CVec> equalized;
  double symbol_power = 1.0;
  BerRecord ber;
};

/// Data and noise come from `seed` exactly as in frame 0 of measure_snr.
FrameTrace simulate_frame(Scheme scheme, const ChannelRealization& ch, double beta, std::size_t n, std::size_t blocks,
                          std::uint64_t seed, bool with_direct = false, bool noiseless = false);

/// Relay gain for `scheme` on channel `ch` under `cfg.beta_policy`
/// (sweep policies use their first value). `trial_seed` feeds the cp_ofdm pilot run.
double select_beta(Scheme scheme, const ChannelRealization& ch, const SimConfig& cfg, bool with_direct,
                   std::uint64_t trial_seed);

/// Empirical SINR-maximizing gain for the truncated-equalizer baseline.
double cp_ofdm_pilot_beta(const ChannelRealization& ch, const SimConfig& cfg, bool with_direct,
                          std::uint64_t trial_seed);

/// BER of every configured scheme at one (SNR_c, RSI) point, averaged over
/// cfg.frames channel draws. Trial t uses seed + t for all schemes.
std::vector<BerRecord> run_ber_point(const SimConfig& cfg, double snr_c_db, double rsi_db, bool with_direct);

SweepResult run_fig2(const SimConfig& cfg);
SweepResult run_fig3(const SimConfig& cfg);
SweepResult run_fig4(const SimConfig& cfg);
SweepResult run_fig5(const SimConfig& cfg);

/// Header `scheme,<sweep_name>,bits,errors,ber`.
void write_ber_csv(std::ostream& os, const SweepResult& r);
/// Header `beta2,alpha,gamma_db_analytic,gamma_db_measured,gamma_pre_db_analytic,gamma_pre_db_measured,optimum`.
void write_gain_csv(std::ostream& os, const SweepResult& r);
void write_csv(std::ostream& os, const SweepResult& r);
void write_metadata(std::ostream& os, const SweepResult& r);

/// Deterministic number formatting shared by the CSV writers and the CLI.
std::string format_number(double v);

std::string version_string();

/// Command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iirrelay
