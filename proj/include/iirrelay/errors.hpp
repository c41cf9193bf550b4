#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iirrelay {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

/// |beta * h_rr| at or beyond the stability guard.
class StabilityError : public Error {
public:
  using Error::Error;
};

/// A zero (or numerically zero) hop gain where the model divides by it.
class DegenerateChannel : public Error {
public:
  using Error::Error;
};

class SingularSubcarrier : public Error {
public:
  SingularSubcarrier(const std::string& what, std::size_t subcarrier)
      : Error(what + " (subcarrier " + std::to_string(subcarrier) + ")"), subcarrier_(subcarrier) {}
  std::size_t subcarrier() const noexcept { return subcarrier_; }

private:
  std::size_t subcarrier_;
};

class FramingError : public Error {
public:
  using Error::Error;
};

/// Non-finite value or divergence detected inside a sample loop.
class NumericError : public Error {
public:
  NumericError(const std::string& what, std::size_t sample)
      : Error(what + " at sample " + std::to_string(sample)), sample_(sample) {}
  std::size_t sample() const noexcept { return sample_; }

private:
  std::size_t sample_;
};

}  // namespace iirrelay
