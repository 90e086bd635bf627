#pragma once

#include <vector>

#include "sslm/nn/tensor.hpp"

namespace sslm {

// Bias-corrected adaptive-moment optimizer over a fixed set of parameter
// blocks. Accumulator layout mirrors the blocks passed at construction.
class AdamState {
 public:
  AdamState(const std::vector<ParamRef>& params, double learning_rate,
            double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  // One update from the gradients currently stored in the blocks.
  // Throws NumericError on a non-finite gradient.
  void step(const std::vector<ParamRef>& params);

  long step_count() const { return step_; }
  double learning_rate() const { return lr_; }

 private:
  std::vector<Mat> m_, v_;
  long step_ = 0;
  double lr_, beta1_, beta2_, eps_;
};

// Scales gradients in place so their global L2 norm is at most max_norm.
// Returns the pre-clip norm.
double clip_gradients(const std::vector<ParamRef>& params, double max_norm);

}  // namespace sslm
