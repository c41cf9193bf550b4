#include "iirrelay/linkbudget.hpp"

#include <cmath>
#include <limits>

#include "iirrelay/txchain.hpp"

namespace iirrelay {

namespace {

constexpr double kGolden = 0.61803398874989484820;  // 1 / phi

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
}

double hop_power(const ChannelRealization& ch) {
  const double g = std::norm(ch.h_sr) * std::norm(ch.h_rd);
  if (!(g > 0.0)) throw DegenerateChannel("h_sr and h_rd must be non-zero");
  return g;
}

}  // namespace

LinkBudget budget(const ChannelRealization& ch, double beta, std::size_t n) {
  if (n == 0) throw InvalidInput("block size must be positive");
  require_stable(beta, ch.h_rr);
  const double hops = hop_power(ch);
  const double sr2 = std::norm(ch.h_sr);
  const double rd2 = std::norm(ch.h_rd);
  const double nn = static_cast<double>(n);

  LinkBudget b;
  b.beta = beta;
  b.alpha = beta * beta * std::norm(ch.h_rr);
  const double a = b.alpha;
  b.P_R1 = ch.sigma2_R / sr2;
  b.P_n = beta * beta * rd2 * ch.sigma2_R / (1.0 - a);
  b.P_R2 = (1.0 + a) * ch.sigma2_R / (sr2 * (1.0 - a));
  b.P_R = ((nn - 1.0) * b.P_R1 + b.P_R2) / nn;
  b.sigma_x2 = precoded_symbol_power(a, n);
  b.P_y = beta * beta * hops * b.sigma_x2 / (1.0 - a);
  b.P_GI = b.sigma_x2 * (1.0 + a) / (1.0 - a);
  b.eta = std::norm(ch.h_rr) * ch.sigma2_D / hops;
  b.degenerate = beta == 0.0 || std::norm(ch.h_rr) == 0.0;

  if (beta == 0.0) {
    b.P_D = std::numeric_limits<double>::infinity();
    b.gamma = 0.0;
    b.gamma_pre = 0.0;
  } else {
    b.P_D = (1.0 + a) * ch.sigma2_D / (beta * beta * hops);
    b.gamma = b.sigma_x2 / (b.P_R + b.P_D);
    b.gamma_pre = gamma_pre(ch, beta);
  }
  b.delta = b.gamma - b.gamma_pre;
  return b;
}

double gamma_closed_form(double alpha, double eta, double p_r1, std::size_t n) {
  check_alpha(alpha);
  const double a = alpha;
  const double nn = static_cast<double>(n);
  const double num = nn * (nn + 1.0) * (a - 1.0) * (a - 1.0) * a;
  const double den = ((a - 1.0) * nn - a - 1.0) * (eta * (a * a - 1.0) * nn + p_r1 * a * ((a - 1.0) * nn - 2.0 * a));
  return num / den;
}

double gamma_pre(const ChannelRealization& ch, double beta) {
  require_stable(beta, ch.h_rr);
  const double hops = hop_power(ch);
  const double b2 = beta * beta;
  const double a = b2 * std::norm(ch.h_rr);
  const double sigma_s2 = b2 * hops / (1.0 + a);
  const double p_r3 = b2 * std::norm(ch.h_rd) * ch.sigma2_R / (1.0 - a);
  const double noise = p_r3 + ch.sigma2_D;
  if (noise == 0.0) return sigma_s2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return sigma_s2 / noise;
}

double gamma_pre_closed_form(double alpha, double eta, double p_r1) {
  check_alpha(alpha);
  return 1.0 / ((1.0 + alpha) * (p_r1 / (1.0 - alpha) + eta / alpha));
}

double delta_poly(double alpha, double eta, double p_r1, std::size_t n) {
  const double a = alpha;
  const double nn = static_cast<double>(n);
  return p_r1 * a * (1.0 - a) * nn * nn + (p_r1 * (a * a - a) + eta * (a * a - 1.0)) * nn - p_r1 * (a * a + a);
}

DeltaGap delta_gap(const ChannelRealization& ch, double beta, std::size_t n) {
  const LinkBudget b = budget(ch, beta, n);
  check_alpha(b.alpha);
  return {b.delta, delta_poly(b.alpha, b.eta, b.P_R1, n)};
}

double beta_from_alpha(double alpha, Complex h_rr) {
  const double m = std::abs(h_rr);
  if (m == 0.0) throw DegenerateChannel("alpha does not determine beta when h_rr = 0");
  return std::sqrt(alpha) / m;
}

ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi, std::size_t grid_points,
                          double tol) {
  if (!(hi > lo)) throw InvalidInput("empty search interval");
  if (grid_points < 3) throw InvalidInput("grid needs at least three points");
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");

  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  std::size_t best = 0;
  double best_f = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double v = f(lo + step * static_cast<double>(i));
    if (v > best_f) {
      best_f = v;
      best = i;
    }
  }

  double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
  double b = lo + step * static_cast<double>(best + 1 >= grid_points ? grid_points - 1 : best + 1);
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iterations = 0;
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
    ++iterations;
  }

  ScalarMax out;
  out.x = fc >= fd ? c : d;
  out.fx = std::max(fc, fd);
  out.iterations = iterations;
  const double grid_x = lo + step * static_cast<double>(best);
  if (best_f > out.fx) {
    out.x = grid_x;
    out.fx = best_f;
  }
  return out;
}

namespace {

GainSolution optimize_over_alpha(const ChannelRealization& ch, const GainSearch& search,
                                 const std::function<double(double beta)>& objective) {
  if (std::abs(ch.h_rr) == 0.0) {
    GainSolution sol;
    sol.beta_star = std::sqrt(search.beta2_cap);
    sol.gamma_star = objective(sol.beta_star);
    return sol;
  }
  const double m = search.alpha_margin;
  if (!(m > 0.0 && m < 0.5)) throw InvalidInput("alpha margin must lie in (0, 0.5)");
  const ScalarMax best = maximize_scalar([&](double a) { return objective(beta_from_alpha(a, ch.h_rr)); }, m, 1.0 - m,
                                         search.grid_points, search.tol);
  GainSolution sol;
  sol.alpha_star = best.x;
  sol.beta_star = beta_from_alpha(best.x, ch.h_rr);
  sol.gamma_star = best.fx;
  sol.iterations = best.iterations;
  return sol;
}

}  // namespace

GainSolution optimize_gain(const ChannelRealization& ch, std::size_t n, const GainSearch& search) {
  hop_power(ch);
  return optimize_over_alpha(ch, search, [&](double beta) { return budget(ch, beta, n).gamma; });
}

GainSolution optimize_prefilter_gain(const ChannelRealization& ch, const GainSearch& search) {
  hop_power(ch);
  return optimize_over_alpha(ch, search, [&](double beta) { return gamma_pre(ch, beta); });
}

}  // namespace iirrelay
