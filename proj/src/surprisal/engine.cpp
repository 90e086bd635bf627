#include "sslm/surprisal/engine.hpp"

#include <algorithm>
#include <cmath>

#include "sslm/nn/softmax.hpp"
#include "sslm/util/csv.hpp"
#include "sslm/util/errors.hpp"

namespace sslm {

double lexical_surprisal(const JointModel& model, const PrefixState& state, int word_id) {
  Vec p = model.next_word_distribution(state);
  if (word_id < 0 || word_id >= static_cast<int>(p.size()))
    throw DataError("lexical_surprisal: word id out of range");
  double s = -std::log(p[word_id]);
  return s < 0.0 ? 0.0 : s;
}

namespace {

// Candidate next words ordered by id: every lexical word plus unk, minus
// the boundary symbols.
std::vector<int> candidate_words(const JointModel& model) {
  std::vector<int> ids;
  ids.reserve(model.vocab().size());
  for (int w = 0; w < model.vocab().size(); ++w)
    if (w != model.vocab().bos_id() && w != model.vocab().eos_id()) ids.push_back(w);
  return ids;
}

TagPrior mix_tag_posteriors(const JointModel& model, const PrefixState& state, int k,
                            bool parallel) {
  if (k < 1) throw DataError("next_tag_prior: k must be >= 1");
  Vec p_word = model.next_word_distribution(state);
  std::vector<int> ids = candidate_words(model);
  const int n_cand = static_cast<int>(ids.size());
  if (k > n_cand) k = n_cand;

  // Top-k by probability; ties broken toward the lower word id so the
  // selection is deterministic.
  std::partial_sort(ids.begin(), ids.begin() + k, ids.end(), [&](int a, int b) {
    if (p_word[a] != p_word[b]) return p_word[a] > p_word[b];
    return a < b;
  });
  ids.resize(k);

  double mass = 0.0;
  for (int w : ids) mass += p_word[w];

  const int n_tags = model.tags().size();
  // Each candidate's weighted posterior lands in its own slot; the final
  // reduction runs serially in slot order, so the result is independent of
  // the parallel schedule.
  std::vector<Vec> rows(k);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < k; ++i) {
    PrefixState advanced = model.advanced_copy(state, ids[i]);
    Vec post = model.tag_posterior(advanced);
    for (double& v : post) v *= p_word[ids[i]];
    rows[i] = std::move(post);
  }

  TagPrior prior;
  prior.probs.assign(n_tags, 0.0);
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < n_tags; ++c) prior.probs[c] += rows[i][c];
  const double inv = 1.0 / mass;
  for (double& v : prior.probs) v *= inv;

  prior.context_length = state.tokens_consumed;
  prior.k_used = k;
  prior.mass_covered = mass;

  double sum = 0.0;
  for (double v : prior.probs) sum += v;
  if (std::abs(sum - 1.0) > 1e-6)
    throw NumericError("next_tag_prior: mixture sum off by more than 1e-6");
  return prior;
}

}  // namespace

TagPrior next_tag_prior(const JointModel& model, const PrefixState& state, int k) {
  return mix_tag_posteriors(model, state, k, true);
}

TagPrior next_tag_prior_serial(const JointModel& model, const PrefixState& state, int k) {
  return mix_tag_posteriors(model, state, k, false);
}

double syntactic_surprisal(const TagPrior& prior, const Vec& posterior) {
  if (prior.probs.size() != posterior.size())
    throw DataError("syntactic_surprisal: prior and posterior are over different tag sets");
  double inner = 0.0;
  for (std::size_t c = 0; c < posterior.size(); ++c)
    inner += prior.probs[c] * posterior[c];
  if (!(inner > 0.0))
    throw NumericError(
        "syntactic_surprisal: zero prior-posterior overlap; the truncated tag prior "
        "missed every plausible tag, rerun with a larger k");
  double s = -std::log(inner);
  return s < 0.0 ? 0.0 : s;
}

std::vector<SurprisalRecord> score_sentence(const JointModel& model,
                                            const std::vector<std::string>& tokens,
                                            int k) {
  if (tokens.empty()) throw DataError("score_sentence: empty token sequence");
  std::vector<SurprisalRecord> records;
  records.reserve(tokens.size());
  PrefixState state = model.start_state();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    SurprisalRecord rec;
    rec.token_index = static_cast<int>(i);
    rec.token = tokens[i];
    rec.oov = !model.vocab().contains(tokens[i]);
    int wid = model.vocab().id_of(tokens[i]);

    TagPrior prior = next_tag_prior(model, state, k);
    rec.surp_lex = lexical_surprisal(model, state, wid);
    rec.tag_prior_entropy = entropy(prior.probs);
    rec.k_used = prior.k_used;

    model.advance(state, wid);
    Vec posterior = model.tag_posterior(state);
    rec.surp_syn = syntactic_surprisal(prior, posterior);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SurprisalRecord> score_items(const JointModel& model,
                                         const std::vector<ExperimentalItem>& items,
                                         int k) {
  // Parallelism lives inside next_tag_prior (per-candidate advances); the
  // sentence loop stays serial so nested teams do not fight over two cores.
  std::vector<std::vector<SurprisalRecord>> per_item(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    per_item[i] = score_sentence(model, items[i].tokens, k);
    for (auto& rec : per_item[i]) {
      rec.item_id = items[i].item_id;
      rec.condition = items[i].condition;
    }
  }
  std::vector<SurprisalRecord> all;
  for (auto& rows : per_item)
    all.insert(all.end(), rows.begin(), rows.end());
  return all;
}

void write_surprisal_csv(const std::string& path,
                         const std::vector<SurprisalRecord>& records) {
  CsvWriter out(path);
  out.write_row({"item_id", "condition", "token_index", "token", "surp_lex", "surp_syn",
                 "tag_prior_entropy", "k_used", "oov_flag"});
  for (const auto& r : records)
    out.write_row({std::to_string(r.item_id), to_string(r.condition),
                   std::to_string(r.token_index), r.token, format_double(r.surp_lex),
                   format_double(r.surp_syn), format_double(r.tag_prior_entropy),
                   std::to_string(r.k_used), r.oov ? "1" : "0"});
}

std::vector<SurprisalRecord> read_surprisal_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  int c_item = table.require_column("item_id");
  int c_cond = table.require_column("condition");
  int c_tok = table.require_column("token_index");
  int c_word = table.require_column("token");
  int c_lex = table.require_column("surp_lex");
  int c_syn = table.require_column("surp_syn");
  int c_ent = table.require_column("tag_prior_entropy");
  int c_k = table.require_column("k_used");
  int c_oov = table.require_column("oov_flag");
  std::vector<SurprisalRecord> records;
  for (const auto& row : table.rows) {
    SurprisalRecord r;
    r.item_id = std::stoi(row[c_item]);
    r.condition = condition_from_string(row[c_cond]);
    r.token_index = std::stoi(row[c_tok]);
    r.token = row[c_word];
    r.surp_lex = std::stod(row[c_lex]);
    r.surp_syn = std::stod(row[c_syn]);
    r.tag_prior_entropy = std::stod(row[c_ent]);
    r.k_used = std::stoi(row[c_k]);
    r.oov = row[c_oov] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace sslm
