#include "sslm/nn/adam.hpp"

#include <cmath>

#include "sslm/util/errors.hpp"

namespace sslm {

AdamState::AdamState(const std::vector<ParamRef>& params, double learning_rate,
                     double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const auto& p : params) {
    m_.emplace_back(p.value->rows, p.value->cols);
    v_.emplace_back(p.value->rows, p.value->cols);
  }
}

void AdamState::step(const std::vector<ParamRef>& params) {
  if (params.size() != m_.size())
    throw DataError("adam: parameter block count changed");
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Mat& val = *params[k].value;
    const Mat& grad = *params[k].grad;
    if (grad.size() != val.size())
      throw DataError("adam: gradient shape mismatch in " + params[k].name);
    Mat& m = m_[k];
    Mat& v = v_[k];
    for (std::size_t i = 0; i < val.size(); ++i) {
      double g = grad.a[i];
      if (!std::isfinite(g))
        throw NumericError("adam: non-finite gradient in " + params[k].name);
      m.a[i] = beta1_ * m.a[i] + (1.0 - beta1_) * g;
      v.a[i] = beta2_ * v.a[i] + (1.0 - beta2_) * g * g;
      double mhat = m.a[i] / bc1;
      double vhat = v.a[i] / bc2;
      val.a[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

double clip_gradients(const std::vector<ParamRef>& params, double max_norm) {
  double sq = 0.0;
  for (const auto& p : params)
    for (double g : p.grad->a) sq += g * g;
  double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    double scale = max_norm / norm;
    for (const auto& p : params)
      for (double& g : p.grad->a) g *= scale;
  }
  return norm;
}

}  // namespace sslm
