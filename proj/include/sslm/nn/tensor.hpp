#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sslm {

using Vec = std::vector<double>;

// Row-major dense matrix of 64-bit floats. Biases are stored as 1 x n.
struct Mat {
  int rows = 0;
  int cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double* operator[](int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
  const double* operator[](int r) const {
    return a.data() + static_cast<std::size_t>(r) * cols;
  }

  std::size_t size() const { return a.size(); }
  void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

// Named view into a set of parameters and their gradient accumulators;
// optimizers and gradient checks iterate these without knowing the model.
struct ParamRef {
  std::string name;
  Mat* value = nullptr;
  Mat* grad = nullptr;
};

}  // namespace sslm
