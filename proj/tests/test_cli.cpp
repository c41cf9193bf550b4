#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "iirrelay/harness.hpp"

using namespace iirrelay;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "iirrelay");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

}  // namespace

TEST_CASE("optimize-gain matches the library optimizer") {
  const Run r = cli({"optimize-gain", "--h-sr", "1", "--h-rd", "1", "--h-rr", "0.178", "--snr-c", "10"});
  REQUIRE(r.code == 0);
  const auto kv = parse_kv(r.out);
  ChannelRealization ch;
  ch.h_rr = 0.178;
  ch.sigma2_R = ch.sigma2_D = 0.1;
  const auto sol = optimize_gain(ch, 128);
  CHECK(std::stod(kv.at("alpha_star")) == doctest::Approx(*sol.alpha_star).epsilon(1e-9));
  CHECK(std::stod(kv.at("beta_star")) == doctest::Approx(sol.beta_star).epsilon(1e-9));
  CHECK(std::stod(kv.at("gamma_star_db")) == doctest::Approx(linear_to_db(sol.gamma_star)).epsilon(1e-9));
}

TEST_CASE("budget prints every field") {
  const Run r = cli({"budget", "--alpha", "0.5", "--h-rr", "0.2"});
  REQUIRE(r.code == 0);
  const auto kv = parse_kv(r.out);
  for (const char* k : {"alpha", "beta", "P_D", "P_R1", "P_n", "P_R2", "P_R", "P_y", "P_GI", "sigma_x2", "eta", "gamma_db",
                        "gamma_pre_db", "delta", "degenerate"})
    CHECK(kv.count(k) == 1);
  CHECK(std::stod(kv.at("alpha")) == doctest::Approx(0.5));
  CHECK(cli({"budget", "--h-rr", "0.2"}).code != 0);
  CHECK(cli({"budget", "--beta", "10", "--h-rr", "0.2"}).code != 0);
}

TEST_CASE("figure subcommands write CSV and metadata") {
  const auto dir = std::filesystem::temp_directory_path() / "iirrelay_cli_test";
  std::filesystem::create_directories(dir);
  const auto csv = (dir / "fig3.csv").string();
  const Run r = cli({"fig3", "--frames", "3", "--n", "16", "--blocks", "2", "--snr-c", "10,20", "--threads", "1", "--out", csv});
  REQUIRE(r.code == 0);
  std::ifstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == "scheme,snr_c_db,bits,errors,ber");
  int rows = 0;
  for (std::string line; std::getline(is, line);) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(rows == 8);
  CHECK(std::filesystem::exists(csv + ".meta"));

  const Run again = cli({"fig3", "--frames", "3", "--n", "16", "--blocks", "2", "--snr-c", "10,20", "--threads", "2"});
  std::ifstream is2(csv);
  std::stringstream ss;
  ss << is2.rdbuf();
  CHECK(again.out == ss.str());
  std::filesystem::remove_all(dir);
}

TEST_CASE("config file and flag precedence") {
  const auto path = std::filesystem::temp_directory_path() / "iirrelay_cli_cfg.txt";
  {
    std::ofstream os(path);
    os << "n = 16\nblocks_per_frame = 2\nframes = 2\nsnr_c_db = 30\nschemes = proposed\n";
  }
  const Run r = cli({"fig4", "--config", path.string(), "--snr-c", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("proposed,5,") != std::string::npos);
  CHECK(r.out.find("prefilter") == std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("errors give one diagnostic line and a nonzero code") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"fig3", "--bogus"},
           {"fig3", "--config", "/nonexistent/file"},
           {"fig3", "--n", "100"},
           {"fig3", "--schemes", "magic"},
           {"fig2", "--beta-policy", "sweep:1e9"},
           {"budget", "--beta", "100"},
           {}}) {
    const Run r = cli(args);
    CHECK(r.code != 0);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
}

TEST_CASE("simulate") {
  const Run r = cli({"simulate", "--h-rr", "0.178", "--frames", "2", "--blocks", "4"});
  REQUIRE(r.code == 0);
  const auto kv = parse_kv(r.out);
  CHECK(kv.count("snr_db") == 1);
  CHECK(kv.at("scheme") == "proposed");
  CHECK(cli({"simulate", "--h-rr", "0.5", "--beta2", "16"}).code != 0);
}

TEST_CASE("help and version") {
  CHECK(cli({"--help"}).code == 0);
  const Run v = cli({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(version_string()) != std::string::npos);
}
