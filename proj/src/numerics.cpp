#include "iirrelay/numerics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>

namespace iirrelay {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  if (n == 0) throw InvalidInput("transform length must be positive");
  twiddle_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // reduce the angle first so large k keep full precision
    const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(ang), std::sin(ang)};
  }
  if (pow2_) {
    rev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      rev_[i] = r;
    }
  }
}

void FftPlan::forward(std::span<Complex> data) const { transform(data, false); }

void FftPlan::inverse(std::span<Complex> data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

void FftPlan::transform(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_)
    throw InvalidInput("transform length " + std::to_string(data.size()) + " does not match plan size " +
                       std::to_string(n_));
  if (pow2_)
    radix2(data, inverse);
  else
    direct(data, inverse);
}

void FftPlan::radix2(std::span<Complex> data, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (i < rev_[i]) std::swap(data[i], data[rev_[i]]);

  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        Complex w = twiddle_[j * stride];
        if (inverse) w = std::conj(w);
        const Complex u = data[start + j];
        const Complex t = w * data[start + j + half];
        data[start + j] = u + t;
        data[start + j + half] = u - t;
      }
    }
  }
}

void FftPlan::direct(std::span<Complex> data, bool inverse) const {
  CVec out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    Complex acc{};
    for (std::size_t n = 0; n < n_; ++n) {
      Complex w = twiddle_[(k * n) % n_];
      if (inverse) w = std::conj(w);
      acc += data[n] * w;
    }
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), data.begin());
}

const FftPlan& fft_plan(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
  return *it->second;
}

CVec dft(std::span<const Complex> v) {
  if (v.empty()) throw InvalidInput("dft of an empty vector");
  CVec out(v.begin(), v.end());
  fft_plan(out.size()).forward(out);
  return out;
}

CVec idft(std::span<const Complex> v) {
  if (v.empty()) throw InvalidInput("idft of an empty vector");
  CVec out(v.begin(), v.end());
  fft_plan(out.size()).inverse(out);
  return out;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t sm = seed;
  std::uint64_t mix = stream;
  const std::uint64_t salt = splitmix64(mix);
  sm ^= salt;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

Complex gaussian_complex(Rng& rng, double variance) {
  if (!(variance >= 0.0)) throw InvalidInput("gaussian variance must be non-negative");
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  // the pair is always consumed so a zero variance keeps generators aligned
  if (variance == 0.0) return {};
  const double r = std::sqrt(-variance * std::log(u1));  // sqrt(variance/2) * sqrt(-2 ln u1)
  return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

void fill_gaussian(Rng& rng, double variance, std::span<Complex> out) {
  for (auto& v : out) v = gaussian_complex(rng, variance);
}

double mean_power(std::span<const Complex> v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : v) acc += std::norm(s);
  return acc / static_cast<double>(v.size());
}

double linear_to_db(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(x);
}

}  // namespace iirrelay
