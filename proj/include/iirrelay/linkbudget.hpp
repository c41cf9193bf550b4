#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "iirrelay/channel.hpp"

namespace iirrelay {

/// Noise and signal powers after equalization for one (channel, beta) pair,
/// relay-only path. alpha = |beta h_rr|^2.
struct LinkBudget {
  double alpha = 0.0;
  double beta = 0.0;
  double P_D = 0.0;   // destination noise after the A(z) equalizer
  double P_R1 = 0.0;  // relay noise at block positions 1..N-1
  double P_n = 0.0;   // relay noise power seen at the destination
  double P_R2 = 0.0;  // relay noise at block position 0
  double P_R = 0.0;   // block average of relay noise
  double P_y = 0.0;
  double P_GI = 0.0;
  double sigma_x2 = 1.0;
  double eta = 0.0;
  double gamma = 0.0;
  double gamma_pre = 0.0;
  double delta = 0.0;  // gamma - gamma_pre
  /// beta = 0 (gamma taken as its zero limit) or h_rr = 0 (alpha carries no information).
  bool degenerate = false;
};

LinkBudget budget(const ChannelRealization& ch, double beta, std::size_t n);

/// gamma as a rational function of alpha, eta, P_R1 and N; an independent route
/// to LinkBudget::gamma.
double gamma_closed_form(double alpha, double eta, double p_r1, std::size_t n);

/// SNR of the pre-filtering transmitter; +inf when both noise powers vanish.
double gamma_pre(const ChannelRealization& ch, double beta);

/// gamma_pre written in alpha, eta and P_R1.
double gamma_pre_closed_form(double alpha, double eta, double p_r1);

/// Quadratic in N whose sign equals sign(gamma - gamma_pre) for alpha in (0, 1):
///   P_R1 a (1 - a) N^2 + (P_R1 (a^2 - a) + eta (a^2 - 1)) N - P_R1 (a^2 + a)
double delta_poly(double alpha, double eta, double p_r1, std::size_t n);

struct DeltaGap {
  double delta = 0.0;
  double delta_poly_value = 0.0;
};

DeltaGap delta_gap(const ChannelRealization& ch, double beta, std::size_t n);

/// beta = sqrt(alpha) / |h_rr|.
double beta_from_alpha(double alpha, Complex h_rr);

struct GainSearch {
  std::size_t grid_points = 512;
  double tol = 1e-6;
  /// Search alpha in (margin, 1 - margin).
  double alpha_margin = 1e-4;
  /// Power gain used when h_rr = 0 and no interior optimum exists.
  double beta2_cap = 100.0;
};

struct GainSolution {
  std::optional<double> alpha_star;  // empty in the h_rr = 0 boundary case
  double beta_star = 0.0;
  double gamma_star = 0.0;
  int iterations = 0;
};

struct ScalarMax {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Grid scan over [lo, hi] followed by golden-section refinement on the
/// bracket around the best grid point, stopping when the bracket is below tol.
ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi, std::size_t grid_points,
                          double tol);

/// argmax over alpha of gamma.
GainSolution optimize_gain(const ChannelRealization& ch, std::size_t n, const GainSearch& search = {});

/// Same search applied to gamma_pre.
GainSolution optimize_prefilter_gain(const ChannelRealization& ch, const GainSearch& search = {});

}  // namespace iirrelay
