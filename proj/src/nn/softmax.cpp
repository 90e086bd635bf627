#include "sslm/nn/softmax.hpp"

#include <cmath>
#include <string>

#include "sslm/util/errors.hpp"

namespace sslm {

Vec softmax(const Vec& logits) {
  double mx = logits[0];
  for (double v : logits)
    if (v > mx) mx = v;
  Vec p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    z += p[i];
  }
  double inv = 1.0 / z;
  for (double& v : p) v *= inv;
  return p;
}

double softmax_cross_entropy(const Vec& logits, int target_id, Vec* grad) {
  const int n = static_cast<int>(logits.size());
  if (target_id < 0 || target_id >= n)
    throw DataError("softmax_cross_entropy: target id " + std::to_string(target_id) +
                    " out of range [0, " + std::to_string(n) + ")");
  double mx = logits[0];
  for (double v : logits)
    if (v > mx) mx = v;
  double z = 0.0;
  for (double v : logits) z += std::exp(v - mx);
  double logz = std::log(z) + mx;
  double loss = logz - logits[target_id];
  if (grad != nullptr) {
    grad->resize(n);
    double inv = 1.0 / z;
    for (int i = 0; i < n; ++i) (*grad)[i] = std::exp(logits[i] - mx) * inv;
    (*grad)[target_id] -= 1.0;
  }
  if (!std::isfinite(loss)) throw NumericError("softmax_cross_entropy: non-finite loss");
  return loss;
}

double entropy(const Vec& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

}  // namespace sslm
