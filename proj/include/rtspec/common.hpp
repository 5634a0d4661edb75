#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rtspec {

// Thrown on malformed model files or invalid arguments (CLI exit code 2).
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative solver fails to converge or a guaranteed
// bracket is violated (CLI exit code 3).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an enumeration or state-space budget is exceeded (CLI exit
// code 4).
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Default cap on exact word enumerations (number of words).
inline constexpr std::uint64_t kDefaultEnumBudget = std::uint64_t(1) << 24;

// Hard cap on the number of m-word states of a transfer matrix.
inline constexpr int kMaxStates = 4096;

}  // namespace rtspec
