#pragma once

#include <functional>
#include <vector>

#include "sslm/corpus/supertag_corpus.hpp"
#include "sslm/model/joint_model.hpp"

namespace sslm {

struct TrainConfig {
  int layers = 2;
  int hidden = 64;
  int embed = 64;
  double lr = 0.002;
  int epochs = 10;
  std::uint64_t seed = 1;
  double clip = 5.0;
  int min_count = 1;
  int max_sentence_len = 200;
};

struct EpochStats {
  int epoch = 0;
  double lm_loss = 0.0;     // mean over all steps
  double tag_loss = 0.0;    // mean over supertagged steps
  double total_loss = 0.0;  // mean of per-step (lm + tag) joint losses
  int steps = 0;
};

struct StepRecord {
  int epoch = 0;
  int step = 0;
  double lm_loss = 0.0;
  double tag_loss = 0.0;
  double total_loss = 0.0;
  bool has_tags = false;
  const std::vector<int>* words = nullptr;
  const std::vector<int>* tags = nullptr;
};

// Called after the forward pass and before the parameter update.
using StepObserver = std::function<void(const JointModel&, const StepRecord&)>;

// Exact BPTT gradients of the joint loss for one sentence. Head losses are
// averaged within the sentence; the tag head contributes only when gold
// tags are given. Returns the per-head losses.
JointModel::SentenceLoss backward(const JointModel& model, const std::vector<int>& words,
                                  const std::vector<int>& tags, std::vector<Mat>& grads);

// Joint training over an interleaved schedule of supertagged sentences
// (LM + tag loss) and plain sentences (LM loss only), one sentence per
// update step. Deterministic for a fixed config. On divergence the model is
// rolled back to the last completed epoch and NumericError is thrown.
std::vector<EpochStats> train(JointModel& model, const SupertaggedCorpus& tagged,
                              const std::vector<std::vector<int>>& plain,
                              const TrainConfig& config,
                              const StepObserver& observer = nullptr);

// exp(mean per-token cross-entropy); EOS is a target, BOS is not.
double evaluate_perplexity(const JointModel& model,
                           const std::vector<std::vector<int>>& corpus);

// Fraction of tokens whose gold tag gets the highest posterior; ties break
// toward the lowest tag id.
double evaluate_tag_accuracy(const JointModel& model, const SupertaggedCorpus& corpus);

}  // namespace sslm
