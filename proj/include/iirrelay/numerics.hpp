#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iirrelay/errors.hpp"

namespace iirrelay {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

/// N-point DFT plan. Power-of-two sizes use an iterative radix-2 kernel,
/// any other size falls back to the direct O(N^2) sum.
///
/// Convention: forward is unscaled, inverse carries 1/N.
class FftPlan {
public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

private:
  void transform(std::span<Complex> data, bool inverse) const;
  void radix2(std::span<Complex> data, bool inverse) const;
  void direct(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  bool pow2_;
  CVec twiddle_;                  // exp(-j 2 pi k / N), k < N
  std::vector<std::size_t> rev_;  // bit-reversal permutation (radix-2 only)
};

/// Cached per-thread plan for size n.
const FftPlan& fft_plan(std::size_t n);

CVec dft(std::span<const Complex> v);
CVec idft(std::span<const Complex> v);

/// xoshiro256** seeded through splitmix64.
///
/// `stream` selects an independent sub-sequence for the same seed so a trial
/// can hand separate generators to the channel, data and noise draws.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller; the second variate of each pair is cached).
  double normal();
  std::uint8_t bit() { return static_cast<std::uint8_t>(next() >> 63); }

private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Circularly symmetric CN(0, variance): real and imaginary parts each carry variance/2.
Complex gaussian_complex(Rng& rng, double variance);

/// Fill `out` with i.i.d. CN(0, variance) samples.
void fill_gaussian(Rng& rng, double variance, std::span<Complex> out);

double mean_power(std::span<const Complex> v);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x);

}  // namespace iirrelay
