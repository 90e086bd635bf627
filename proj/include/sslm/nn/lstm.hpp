#pragma once

#include <string>

#include "sslm/nn/tensor.hpp"

namespace sslm {

// One gated recurrent layer. Gate preactivations are stored stacked as
// [input; forget; candidate; output], each block of size hidden.
struct RecurrentCellParams {
  int input_size = 0;
  int hidden_size = 0;
  Mat wx;  // 4h x input
  Mat wh;  // 4h x hidden
  Mat b;   // 1 x 4h

  RecurrentCellParams() = default;
  RecurrentCellParams(int input, int hidden)
      : input_size(input), hidden_size(hidden),
        wx(4 * hidden, input), wh(4 * hidden, hidden), b(1, 4 * hidden) {}
};

// Everything the backward pass needs from one forward step.
struct LstmStepCache {
  Vec x, h_prev, c_prev;
  Vec gate_i, gate_f, gate_g, gate_o;
  Vec c, tanh_c, h;
};

// h_t, c_t from one step; writes the cache when given. Throws NumericError
// (naming the layer) if anything goes non-finite.
void lstm_step(const RecurrentCellParams& params, const Vec& x, const Vec& h_prev,
               const Vec& c_prev, Vec& h_out, Vec& c_out, LstmStepCache* cache = nullptr,
               const std::string& layer_name = "lstm");

struct RecurrentCellGrads {
  Mat wx, wh, b;
  explicit RecurrentCellGrads(const RecurrentCellParams& p)
      : wx(p.wx.rows, p.wx.cols), wh(p.wh.rows, p.wh.cols), b(1, p.b.cols) {}
};

// Accumulates parameter gradients for one step and returns the gradients
// flowing to the step inputs. dh combines the head gradient at this position
// with the recurrent gradient from the following step; dc_in is the cell
// gradient from the following step.
void lstm_step_backward(const RecurrentCellParams& params, const LstmStepCache& cache,
                        const Vec& dh, const Vec& dc_in, RecurrentCellGrads& grads,
                        Vec& dx, Vec& dh_prev, Vec& dc_prev);

}  // namespace sslm
