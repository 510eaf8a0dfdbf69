#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fairfit {

// Bad configuration or malformed input. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values produced during computation. The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Label : std::uint8_t { Wanted, Unwanted };

using Mask = std::vector<Label>;

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;   // 1/sqrt(2*pi)
inline constexpr double kDefaultSigma = 0.70710678118654752440;  // 1/sqrt(2)

}  // namespace fairfit
