#pragma once

#include "sslm/nn/tensor.hpp"

namespace sslm {

// Max-subtracted softmax; output is strictly positive and sums to 1.
Vec softmax(const Vec& logits);

// In nats. grad (optional) receives d loss / d logits = p - onehot(target).
double softmax_cross_entropy(const Vec& logits, int target_id, Vec* grad = nullptr);

// Entropy of a probability vector, in nats (0 log 0 := 0).
double entropy(const Vec& p);

}  // namespace sslm
