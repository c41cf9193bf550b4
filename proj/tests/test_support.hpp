#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "iirrelay/numerics.hpp"

namespace testsupport {

using iirrelay::Complex;
using iirrelay::CVec;

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Textbook O(N^2) DFT, the oracle for the fast transform.
inline CVec naive_dft(std::span<const Complex> v) {
  const std::size_t n = v.size();
  CVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex s{};
    for (std::size_t t = 0; t < n; ++t) s += v[t] * std::polar(1.0, -2.0 * iirrelay::kPi * double(k * t % n) / double(n));
    out[k] = s;
  }
  return out;
}

inline CVec random_vector(iirrelay::Rng& rng, std::size_t n, double var = 1.0) {
  CVec v(n);
  iirrelay::fill_gaussian(rng, var, v);
  return v;
}

}  // namespace testsupport
