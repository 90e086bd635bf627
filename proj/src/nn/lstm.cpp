#include "sslm/nn/lstm.hpp"

#include <cmath>

#include "sslm/nn/kernels.hpp"
#include "sslm/util/errors.hpp"

namespace sslm {

static double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void lstm_step(const RecurrentCellParams& params, const Vec& x, const Vec& h_prev,
               const Vec& c_prev, Vec& h_out, Vec& c_out, LstmStepCache* cache,
               const std::string& layer_name) {
  const int h = params.hidden_size;
  if (static_cast<int>(x.size()) != params.input_size ||
      static_cast<int>(h_prev.size()) != h || static_cast<int>(c_prev.size()) != h)
    throw DataError("lstm_step: input dims do not match " + layer_name);

  Vec pre(4 * h);
  kern::matvec(params.wx, x.data(), pre.data());
  kern::matvec_acc(params.wh, h_prev.data(), pre.data());
  const double* bias = params.b[0];
  for (int i = 0; i < 4 * h; ++i) pre[i] += bias[i];

  Vec gi(h), gf(h), gg(h), go(h);
  h_out.resize(h);
  c_out.resize(h);
  Vec tanh_c(h);
  for (int j = 0; j < h; ++j) {
    gi[j] = sigmoid(pre[j]);
    gf[j] = sigmoid(pre[h + j]);
    gg[j] = std::tanh(pre[2 * h + j]);
    go[j] = sigmoid(pre[3 * h + j]);
    c_out[j] = gf[j] * c_prev[j] + gi[j] * gg[j];
    tanh_c[j] = std::tanh(c_out[j]);
    h_out[j] = go[j] * tanh_c[j];
    if (!std::isfinite(h_out[j]) || !std::isfinite(c_out[j]))
      throw NumericError("lstm_step: non-finite state in " + layer_name);
  }

  if (cache != nullptr) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->c_prev = c_prev;
    cache->gate_i = std::move(gi);
    cache->gate_f = std::move(gf);
    cache->gate_g = std::move(gg);
    cache->gate_o = std::move(go);
    cache->c = c_out;
    cache->tanh_c = std::move(tanh_c);
    cache->h = h_out;
  }
}

void lstm_step_backward(const RecurrentCellParams& params, const LstmStepCache& cache,
                        const Vec& dh, const Vec& dc_in, RecurrentCellGrads& grads,
                        Vec& dx, Vec& dh_prev, Vec& dc_prev) {
  const int h = params.hidden_size;
  Vec dpre(4 * h);
  dc_prev.assign(h, 0.0);
  for (int j = 0; j < h; ++j) {
    double i = cache.gate_i[j], f = cache.gate_f[j];
    double g = cache.gate_g[j], o = cache.gate_o[j];
    double tc = cache.tanh_c[j];
    double dO = dh[j] * tc;
    double dc = dc_in[j] + dh[j] * o * (1.0 - tc * tc);
    double dI = dc * g;
    double dF = dc * cache.c_prev[j];
    double dG = dc * i;
    dc_prev[j] = dc * f;
    dpre[j] = dI * i * (1.0 - i);
    dpre[h + j] = dF * f * (1.0 - f);
    dpre[2 * h + j] = dG * (1.0 - g * g);
    dpre[3 * h + j] = dO * o * (1.0 - o);
  }

  kern::outer_acc(grads.wx, dpre.data(), cache.x.data());
  kern::outer_acc(grads.wh, dpre.data(), cache.h_prev.data());
  double* gb = grads.b[0];
  for (int i = 0; i < 4 * h; ++i) gb[i] += dpre[i];

  dx.assign(params.input_size, 0.0);
  kern::tmatvec_acc(params.wx, dpre.data(), dx.data());
  dh_prev.assign(h, 0.0);
  kern::tmatvec_acc(params.wh, dpre.data(), dh_prev.data());
}

}  // namespace sslm
