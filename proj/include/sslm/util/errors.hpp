#pragma once

#include <stdexcept>
#include <string>

namespace sslm {

// Bad or inconsistent input data (missing files, malformed rows, broken
// invariants in loaded structures). CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (divergence, non-convergence, non-finite values).
// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sslm
