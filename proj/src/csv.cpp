#include <cmath>
#include <cstdio>
#include <ostream>

#include "iirrelay/harness.hpp"

#ifndef IIRRELAY_VERSION
#define IIRRELAY_VERSION "0.0.0"
#endif

namespace iirrelay {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string version_string() { return IIRRELAY_VERSION; }

void write_ber_csv(std::ostream& os, const SweepResult& r) {
  os << "scheme," << r.sweep_name << ",bits,errors,ber\n";
  for (const auto& rec : r.records)
    os << to_string(rec.scheme) << ',' << format_number(rec.sweep_value) << ',' << rec.bits << ',' << rec.errors << ','
       << format_number(rec.ber) << '\n';
}

void write_gain_csv(std::ostream& os, const SweepResult& r) {
  os << "beta2,alpha,gamma_db_analytic,gamma_db_measured,gamma_pre_db_analytic,gamma_pre_db_measured,optimum\n";
  for (const auto& p : r.gain_points)
    os << format_number(p.beta2) << ',' << format_number(p.alpha) << ',' << format_number(p.gamma_db_analytic) << ','
       << format_number(p.gamma_db_measured) << ',' << format_number(p.gamma_pre_db_analytic) << ','
       << format_number(p.gamma_pre_db_measured) << ',' << (p.optimum ? 1 : 0) << '\n';
}

void write_csv(std::ostream& os, const SweepResult& r) {
  if (r.gain_points.empty())
    write_ber_csv(os, r);
  else
    write_gain_csv(os, r);
}

void write_metadata(std::ostream& os, const SweepResult& r) {
  for (const auto& [k, v] : r.metadata) os << k << " = " << v << '\n';
}

}  // namespace iirrelay
