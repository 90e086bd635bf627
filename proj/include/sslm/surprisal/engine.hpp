#pragma once

#include <string>
#include <vector>

#include "sslm/corpus/items.hpp"
#include "sslm/model/joint_model.hpp"

namespace sslm {

// Distribution over the next word's supertag, predicted before that word is
// read, obtained by mixing per-candidate tag posteriors under the LM's
// next-word distribution. Candidates are the lexical words (including unk);
// BOS and EOS carry no supertag and their LM mass is renormalized away.
struct TagPrior {
  Vec probs;            // over C, sums to 1
  int context_length = 0;
  int k_used = 0;
  double mass_covered = 0.0;  // LM mass of the selected candidates, pre-renorm
};

struct SurprisalRecord {
  int item_id = 0;
  Condition condition = Condition::NA;
  int token_index = 0;
  std::string token;
  double surp_lex = 0.0;          // nats
  double surp_syn = 0.0;          // nats
  double tag_prior_entropy = 0.0; // nats
  int k_used = 0;
  bool oov = false;
};

// -ln P(w_next | context). OOV words are scored against unk.
double lexical_surprisal(const JointModel& model, const PrefixState& state, int word_id);

// prior(c) = sum_w p(c | context, w) p(w) over candidate next words.
// k >= |candidates| computes the exact full-vocabulary sum; smaller k keeps
// the k most probable candidates and renormalizes their weights. Candidate
// loops run in parallel; the reduction order is fixed so results do not
// depend on thread count. k < 1 is an error.
TagPrior next_tag_prior(const JointModel& model, const PrefixState& state, int k);

// Serial reference implementation, kept for the test suite and benchmark.
TagPrior next_tag_prior_serial(const JointModel& model, const PrefixState& state, int k);

// -ln <prior, posterior>, clamped at 0 against rounding. A zero inner
// product (possible only with truncated priors) is a hard error.
double syntactic_surprisal(const TagPrior& prior, const Vec& posterior);

// One record per token; token i's prior conditions on w_1..w_{i-1} (BOS
// only for the first token) and its posterior on w_1..w_i.
std::vector<SurprisalRecord> score_sentence(const JointModel& model,
                                            const std::vector<std::string>& tokens,
                                            int k);

// Scores every item; records carry item_id and condition. Sentences are
// processed in parallel; output order is the item order.
std::vector<SurprisalRecord> score_items(const JointModel& model,
                                         const std::vector<ExperimentalItem>& items,
                                         int k);

void write_surprisal_csv(const std::string& path,
                         const std::vector<SurprisalRecord>& records);
std::vector<SurprisalRecord> read_surprisal_csv(const std::string& path);

}  // namespace sslm
