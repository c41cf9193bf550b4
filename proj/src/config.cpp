#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iirrelay/harness.hpp"
#include "text_util.hpp"

namespace iirrelay {

namespace detail {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InvalidInput("invalid number for " + what + ": '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw InvalidInput("invalid number for " + what + ": '" + text + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw InvalidInput("invalid non-negative integer for " + what + ": '" + text + "'");
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw InvalidInput("integer out of range for " + what + ": '" + text + "'");
  }
}

bool parse_bool(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw InvalidInput("invalid boolean for " + what + ": '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) throw InvalidInput("empty list for " + what);
  return out;
}

Complex parse_complex(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '(') {
    if (t.back() != ')') throw InvalidInput("invalid complex value for " + what + ": '" + text + "'");
    const auto parts = split(std::string_view(t).substr(1, t.size() - 2), ',');
    if (parts.size() != 2) throw InvalidInput("invalid complex value for " + what + ": '" + text + "'");
    return {parse_double(parts[0], what), parse_double(parts[1], what)};
  }
  return {parse_double(t, what), 0.0};
}

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_number(c.real());
  return "(" + format_number(c.real()) + "," + format_number(c.imag()) + ")";
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_number(v[i]);
  }
  return s;
}

}  // namespace detail

using namespace detail;

BetaPolicy BetaPolicy::parse(const std::string& text) {
  const std::string t = trim(text);
  BetaPolicy p;
  if (t == "optimized") return p;
  if (t.rfind("fixed:", 0) == 0) {
    p.kind = Kind::fixed;
    p.value = parse_double(t.substr(6), "beta_policy");
    if (!(p.value > 0.0)) throw InvalidInput("fixed power gain must be positive");
    return p;
  }
  if (t.rfind("sweep:", 0) == 0) {
    p.kind = Kind::sweep;
    p.values = parse_list(t.substr(6), "beta_policy");
    for (double v : p.values)
      if (!(v > 0.0)) throw InvalidInput("swept power gains must be positive");
    return p;
  }
  throw InvalidInput("beta_policy must be optimized, fixed:<beta2> or sweep:<list>");
}

std::string BetaPolicy::to_string() const {
  switch (kind) {
    case Kind::optimized: return "optimized";
    case Kind::fixed: return "fixed:" + format_number(value);
    case Kind::sweep: return "sweep:" + join(values);
  }
  return "optimized";
}

SimConfig SimConfig::defaults(Figure f) {
  SimConfig c;
  switch (f) {
    case Figure::gain_sweep:
      c.snr_c_db = {10.0};
      c.schemes = {Scheme::proposed, Scheme::prefilter};
      break;
    case Figure::ber_no_direct: break;
    case Figure::ber_direct: c.direct_link = true; break;
    case Figure::ber_rsi:
      c.snr_c_db = {25.0};
      c.rsi_db = {-30.0, -25.0, -20.0, -15.0, -10.0, -5.0, 0.0};
      c.schemes = {Scheme::proposed, Scheme::prefilter, Scheme::cp_ofdm};
      break;
  }
  return c;
}

void SimConfig::validate() const {
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidInput("N must be a power of two (>= 2)");
  if (blocks_per_frame == 0) throw InvalidInput("blocks_per_frame must be positive");
  if (frames == 0) throw InvalidInput("frames must be at least 1");
  if (snr_c_db.empty()) throw InvalidInput("snr_c_db needs at least one value");
  if (rsi_db.empty()) throw InvalidInput("rsi_db needs at least one value");
  for (double v : snr_c_db)
    if (!std::isfinite(v)) throw InvalidInput("snr_c_db values must be finite");
  for (double v : rsi_db)
    if (!std::isfinite(v)) throw InvalidInput("rsi_db values must be finite");
  if (!std::isfinite(direct_pathloss_db) || direct_pathloss_db < 0.0)
    throw InvalidInput("direct_pathloss_db must be finite and non-negative");
  if (schemes.empty()) throw InvalidInput("at least one scheme is required");
  if (gain_grid < 2) throw InvalidInput("gain_grid must be at least 2");
  if (min_samples == 0) throw InvalidInput("min_samples must be positive");
  if (pilot_frames == 0 || pilot_blocks == 0 || cp_gain_grid < 2) throw InvalidInput("invalid cp_ofdm pilot settings");
  if (gain_search.grid_points < 3 || !(gain_search.tol > 0.0) || !(gain_search.beta2_cap > 0.0))
    throw InvalidInput("invalid gain search settings");
}

void SimConfig::set(const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "n" || key == "N") {
    n = parse_uint(value, key);
  } else if (key == "blocks_per_frame") {
    blocks_per_frame = parse_uint(value, key);
  } else if (key == "frames") {
    frames = parse_uint(value, key);
  } else if (key == "constellation") {
    constellation = parse_modulation(trim(value));
  } else if (key == "snr_c_db") {
    snr_c_db = parse_list(value, key);
  } else if (key == "rsi_db") {
    rsi_db = parse_list(value, key);
  } else if (key == "direct_link") {
    direct_link = parse_bool(value, key);
  } else if (key == "direct_pathloss_db") {
    direct_pathloss_db = parse_double(value, key);
  } else if (key == "schemes" || key == "scheme") {
    schemes.clear();
    for (const auto& s : split(value, ',')) schemes.push_back(parse_scheme(s));
  } else if (key == "seed") {
    seed = parse_uint(value, key);
  } else if (key == "beta_policy") {
    beta_policy = BetaPolicy::parse(value);
  } else if (key == "h_sr" || key == "h_rd" || key == "h_rr") {
    if (!channel) channel = FixedChannel{};
    const Complex c = parse_complex(value, key);
    (key == "h_sr" ? channel->h_sr : key == "h_rd" ? channel->h_rd : channel->h_rr) = c;
  } else if (key == "gain_grid") {
    gain_grid = parse_uint(value, key);
  } else if (key == "min_samples") {
    min_samples = parse_uint(value, key);
  } else if (key == "pilot_frames") {
    pilot_frames = parse_uint(value, key);
  } else if (key == "pilot_blocks") {
    pilot_blocks = parse_uint(value, key);
  } else if (key == "cp_gain_grid") {
    cp_gain_grid = parse_uint(value, key);
  } else if (key == "grid_points") {
    gain_search.grid_points = parse_uint(value, key);
  } else if (key == "tol") {
    gain_search.tol = parse_double(value, key);
  } else if (key == "beta2_cap") {
    gain_search.beta2_cap = parse_double(value, key);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(parse_uint(value, key));
  } else {
    throw InvalidInput("unknown config key '" + key + "'");
  }
}

void SimConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      set(t.substr(0, eq), t.substr(eq + 1));
    } catch (const InvalidInput& e) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> SimConfig::describe() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("n", std::to_string(n));
  kv.emplace_back("blocks_per_frame", std::to_string(blocks_per_frame));
  kv.emplace_back("frames", std::to_string(frames));
  kv.emplace_back("constellation", std::string(to_string(constellation)));
  kv.emplace_back("snr_c_db", join(snr_c_db));
  kv.emplace_back("rsi_db", join(rsi_db));
  kv.emplace_back("direct_link", direct_link ? "true" : "false");
  kv.emplace_back("direct_pathloss_db", format_number(direct_pathloss_db));
  std::string s;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    if (i) s += ',';
    s += to_string(schemes[i]);
  }
  kv.emplace_back("schemes", s);
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("beta_policy", beta_policy.to_string());
  if (channel) {
    kv.emplace_back("h_sr", format_complex(channel->h_sr));
    kv.emplace_back("h_rd", format_complex(channel->h_rd));
    kv.emplace_back("h_rr", format_complex(channel->h_rr));
  }
  kv.emplace_back("gain_grid", std::to_string(gain_grid));
  kv.emplace_back("min_samples", std::to_string(min_samples));
  kv.emplace_back("pilot_frames", std::to_string(pilot_frames));
  kv.emplace_back("pilot_blocks", std::to_string(pilot_blocks));
  kv.emplace_back("cp_gain_grid", std::to_string(cp_gain_grid));
  kv.emplace_back("grid_points", std::to_string(gain_search.grid_points));
  kv.emplace_back("tol", format_number(gain_search.tol));
  kv.emplace_back("beta2_cap", format_number(gain_search.beta2_cap));
  return kv;
}

}  // namespace iirrelay
