#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sslm/corpus/vocabulary.hpp"
#include "sslm/nn/lstm.hpp"
#include "sslm/nn/tensor.hpp"

namespace sslm {

struct ModelDims {
  int layers = 2;
  int hidden = 64;
  int embed = 64;
};

// Encoder state after consuming BOS w_1 .. w_n. Advancing by one token from
// state(n) equals recomputing from scratch over w_1 .. w_{n+1}.
struct PrefixState {
  std::vector<Vec> h;  // per layer
  std::vector<Vec> c;
  int tokens_consumed = 0;  // real tokens, BOS excluded
};

// Shared two-layer recurrent encoder with a next-word decoder over W and a
// supertag decoder over C. The tag decoder read at state(n) is the posterior
// over the supertag of w_n, the most recently consumed word.
class JointModel {
 public:
  JointModel() = default;
  JointModel(Vocabulary vocab, TagInventory tags, ModelDims dims, std::uint64_t seed);

  const Vocabulary& vocab() const { return vocab_; }
  const TagInventory& tags() const { return tags_; }
  const ModelDims& dims() const { return dims_; }
  std::uint64_t seed() const { return seed_; }

  PrefixState start_state() const;  // zero state advanced over BOS
  void advance(PrefixState& state, int word_id) const;
  PrefixState advanced_copy(const PrefixState& state, int word_id) const;

  Vec lm_logits(const PrefixState& state) const;
  Vec tag_logits(const PrefixState& state) const;

  // Strictly positive, sums to 1 within 1e-9 (checked).
  Vec next_word_distribution(const PrefixState& state) const;
  // Posterior over the supertag of the most recent word; requires that the
  // state has consumed at least one real token.
  Vec tag_posterior(const PrefixState& state) const;

  // Mean LM and tag cross-entropy over one sentence (token ids, optional
  // gold tags). BOS is prepended internally; EOS is the final LM target.
  struct SentenceLoss {
    double lm = 0.0;
    double tag = 0.0;
    int lm_positions = 0;
    int tag_positions = 0;
  };
  SentenceLoss sentence_loss(const std::vector<int>& words,
                             const std::vector<int>& tags) const;

  // Parameter blocks in checkpoint order, paired with caller-owned
  // gradient accumulators of identical shapes.
  std::vector<ParamRef> param_refs(std::vector<Mat>& grads) const;
  std::vector<const Mat*> param_blocks() const;
  std::vector<Mat*> param_blocks_mut();
  std::vector<std::string> param_names() const;

  // Rounds every parameter through 32-bit floats so that in-memory scoring
  // matches scoring from a saved checkpoint exactly.
  void quantize_parameters();

  Mat embedding;                           // |W| x embed
  std::vector<RecurrentCellParams> cells;  // layers
  Mat lm_w;                                // |W| x hidden
  Mat lm_b;                                // 1 x |W|
  Mat tag_w;                               // |C| x hidden
  Mat tag_b;                               // 1 x |C|

 private:
  Vocabulary vocab_;
  TagInventory tags_;
  ModelDims dims_;
  std::uint64_t seed_ = 0;
};

}  // namespace sslm
