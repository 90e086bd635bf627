#include "sslm/model/joint_model.hpp"

#include <cmath>

#include "sslm/nn/kernels.hpp"
#include "sslm/nn/softmax.hpp"
#include "sslm/util/errors.hpp"
#include "sslm/util/rng.hpp"

namespace sslm {

JointModel::JointModel(Vocabulary vocab, TagInventory tags, ModelDims dims,
                       std::uint64_t seed)
    : vocab_(std::move(vocab)), tags_(std::move(tags)), dims_(dims), seed_(seed) {
  const int w = vocab_.size();
  const int c = tags_.size();
  embedding = Mat(w, dims_.embed);
  cells.clear();
  for (int l = 0; l < dims_.layers; ++l)
    cells.emplace_back(l == 0 ? dims_.embed : dims_.hidden, dims_.hidden);
  lm_w = Mat(w, dims_.hidden);
  lm_b = Mat(1, w);
  tag_w = Mat(c, dims_.hidden);
  tag_b = Mat(1, c);

  // uniform(-0.1, 0.1) weights, zero biases, forget-gate bias +1.
  Rng rng(seed);
  auto fill = [&](Mat& m) {
    for (double& v : m.a) v = rng.uniform(-0.1, 0.1);
  };
  fill(embedding);
  for (auto& cell : cells) {
    fill(cell.wx);
    fill(cell.wh);
    for (int j = 0; j < dims_.hidden; ++j) cell.b[0][dims_.hidden + j] = 1.0;
  }
  fill(lm_w);
  fill(tag_w);
}

PrefixState JointModel::start_state() const {
  PrefixState s;
  s.h.assign(cells.size(), Vec(dims_.hidden, 0.0));
  s.c.assign(cells.size(), Vec(dims_.hidden, 0.0));
  s.tokens_consumed = -1;  // pre-BOS; advancing over BOS brings it to 0
  advance(s, vocab_.bos_id());
  return s;
}

void JointModel::advance(PrefixState& state, int word_id) const {
  if (word_id < 0 || word_id >= vocab_.size())
    throw DataError("advance: word id out of range");
  Vec x(embedding[word_id], embedding[word_id] + dims_.embed);
  for (std::size_t l = 0; l < cells.size(); ++l) {
    Vec h_new, c_new;
    lstm_step(cells[l], x, state.h[l], state.c[l], h_new, c_new, nullptr,
              "encoder layer " + std::to_string(l));
    x = h_new;
    state.h[l] = std::move(h_new);
    state.c[l] = std::move(c_new);
  }
  ++state.tokens_consumed;
}

PrefixState JointModel::advanced_copy(const PrefixState& state, int word_id) const {
  PrefixState copy = state;
  advance(copy, word_id);
  return copy;
}

Vec JointModel::lm_logits(const PrefixState& state) const {
  if (state.h.empty() || static_cast<int>(state.h.back().size()) != dims_.hidden)
    throw DataError("lm_logits: state does not match model");
  Vec logits(vocab_.size());
  kern::matvec(lm_w, state.h.back().data(), logits.data());
  const double* b = lm_b[0];
  for (int i = 0; i < vocab_.size(); ++i) logits[i] += b[i];
  return logits;
}

Vec JointModel::tag_logits(const PrefixState& state) const {
  if (state.h.empty() || static_cast<int>(state.h.back().size()) != dims_.hidden)
    throw DataError("tag_logits: state does not match model");
  Vec logits(tags_.size());
  kern::matvec(tag_w, state.h.back().data(), logits.data());
  const double* b = tag_b[0];
  for (int i = 0; i < tags_.size(); ++i) logits[i] += b[i];
  return logits;
}

static void check_distribution(const Vec& p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v > 0.0)) throw NumericError(std::string(what) + ": non-positive probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw NumericError(std::string(what) + ": distribution sum off by more than 1e-9");
}

Vec JointModel::next_word_distribution(const PrefixState& state) const {
  Vec p = softmax(lm_logits(state));
  check_distribution(p, "next_word_distribution");
  return p;
}

Vec JointModel::tag_posterior(const PrefixState& state) const {
  if (state.tokens_consumed < 1)
    throw DataError("tag_posterior: state has not consumed any real token");
  Vec p = softmax(tag_logits(state));
  check_distribution(p, "tag_posterior");
  return p;
}

JointModel::SentenceLoss JointModel::sentence_loss(const std::vector<int>& words,
                                                   const std::vector<int>& tags) const {
  SentenceLoss out;
  PrefixState state = start_state();
  const int n = static_cast<int>(words.size());
  double lm_sum = 0.0, tag_sum = 0.0;
  for (int t = 0; t <= n; ++t) {
    int target = t < n ? words[t] : vocab_.eos_id();
    lm_sum += softmax_cross_entropy(lm_logits(state), target);
    ++out.lm_positions;
    if (t < n) {
      advance(state, words[t]);
      if (!tags.empty()) {
        tag_sum += softmax_cross_entropy(tag_logits(state), tags[t]);
        ++out.tag_positions;
      }
    }
  }
  out.lm = lm_sum / out.lm_positions;
  out.tag = out.tag_positions > 0 ? tag_sum / out.tag_positions : 0.0;
  return out;
}

std::vector<std::string> JointModel::param_names() const {
  std::vector<std::string> names{"embedding"};
  for (std::size_t l = 0; l < cells.size(); ++l) {
    names.push_back("lstm" + std::to_string(l) + ".wx");
    names.push_back("lstm" + std::to_string(l) + ".wh");
    names.push_back("lstm" + std::to_string(l) + ".b");
  }
  names.insert(names.end(), {"lm.w", "lm.b", "tag.w", "tag.b"});
  return names;
}

std::vector<Mat*> JointModel::param_blocks_mut() {
  std::vector<Mat*> blocks{&embedding};
  for (auto& cell : cells) {
    blocks.push_back(&cell.wx);
    blocks.push_back(&cell.wh);
    blocks.push_back(&cell.b);
  }
  blocks.insert(blocks.end(), {&lm_w, &lm_b, &tag_w, &tag_b});
  return blocks;
}

std::vector<const Mat*> JointModel::param_blocks() const {
  auto blocks = const_cast<JointModel*>(this)->param_blocks_mut();
  return {blocks.begin(), blocks.end()};
}

std::vector<ParamRef> JointModel::param_refs(std::vector<Mat>& grads) const {
  auto blocks = const_cast<JointModel*>(this)->param_blocks_mut();
  auto names = param_names();
  if (grads.size() != blocks.size()) {
    grads.clear();
    for (const Mat* b : blocks) grads.emplace_back(b->rows, b->cols);
  }
  std::vector<ParamRef> refs;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    refs.push_back(ParamRef{names[i], blocks[i], &grads[i]});
  return refs;
}

void JointModel::quantize_parameters() {
  for (Mat* block : param_blocks_mut())
    for (double& v : block->a) v = static_cast<double>(static_cast<float>(v));
}

}  // namespace sslm
