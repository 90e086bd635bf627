#include "sslm/model/trainer.hpp"

#include <cmath>

#include "sslm/nn/adam.hpp"
#include "sslm/nn/kernels.hpp"
#include "sslm/nn/softmax.hpp"
#include "sslm/util/errors.hpp"
#include "sslm/util/rng.hpp"

namespace sslm {

namespace {

// Forward pass over one sentence with everything cached for BPTT.
struct SentenceForward {
  std::vector<int> inputs;                         // BOS w_1 .. w_n
  std::vector<std::vector<LstmStepCache>> caches;  // [t][layer]
  std::vector<Vec> lm_grads;                       // d loss / d lm logits, per t
  std::vector<Vec> tag_grads;                      // per t (empty when untagged)
  JointModel::SentenceLoss loss;
};

SentenceForward run_forward(const JointModel& model, const std::vector<int>& words,
                            const std::vector<int>& tags) {
  const auto& dims = model.dims();
  const int n = static_cast<int>(words.size());
  const bool tagged = !tags.empty();

  SentenceForward fw;
  fw.inputs.push_back(model.vocab().bos_id());
  fw.inputs.insert(fw.inputs.end(), words.begin(), words.end());

  fw.caches.resize(n + 1);
  fw.lm_grads.resize(n + 1);
  fw.tag_grads.resize(n + 1);

  std::vector<Vec> h(dims.layers, Vec(dims.hidden, 0.0));
  std::vector<Vec> c(dims.layers, Vec(dims.hidden, 0.0));

  const double lm_scale = 1.0 / (n + 1);
  const double tag_scale = tagged && n > 0 ? 1.0 / n : 0.0;
  double lm_sum = 0.0, tag_sum = 0.0;

  for (int t = 0; t <= n; ++t) {
    fw.caches[t].resize(dims.layers);
    int word_in = fw.inputs[t];
    Vec x(model.embedding[word_in], model.embedding[word_in] + dims.embed);
    for (int l = 0; l < dims.layers; ++l) {
      Vec h_new, c_new;
      lstm_step(model.cells[l], x, h[l], c[l], h_new, c_new, &fw.caches[t][l],
                "encoder layer " + std::to_string(l));
      x = h_new;
      h[l] = std::move(h_new);
      c[l] = std::move(c_new);
    }

    // LM head: predict words[t] (or EOS at the end).
    Vec lm_logits(model.vocab().size());
    kern::matvec(model.lm_w, h.back().data(), lm_logits.data());
    for (int i = 0; i < model.vocab().size(); ++i) lm_logits[i] += model.lm_b[0][i];
    int lm_target = t < n ? words[t] : model.vocab().eos_id();
    lm_sum += softmax_cross_entropy(lm_logits, lm_target, &fw.lm_grads[t]);
    for (double& g : fw.lm_grads[t]) g *= lm_scale;

    // Tag head: posterior over the tag of the word just consumed (t >= 1).
    if (tagged && t >= 1) {
      Vec tag_logits(model.tags().size());
      kern::matvec(model.tag_w, h.back().data(), tag_logits.data());
      for (int i = 0; i < model.tags().size(); ++i) tag_logits[i] += model.tag_b[0][i];
      tag_sum += softmax_cross_entropy(tag_logits, tags[t - 1], &fw.tag_grads[t]);
      for (double& g : fw.tag_grads[t]) g *= tag_scale;
    }
  }

  fw.loss.lm = lm_sum * lm_scale;
  fw.loss.lm_positions = n + 1;
  fw.loss.tag = tagged && n > 0 ? tag_sum * tag_scale : 0.0;
  fw.loss.tag_positions = tagged ? n : 0;
  return fw;
}

}  // namespace

JointModel::SentenceLoss backward(const JointModel& model, const std::vector<int>& words,
                                  const std::vector<int>& tags, std::vector<Mat>& grads) {
  const auto& dims = model.dims();
  const int n = static_cast<int>(words.size());

  auto refs = model.param_refs(grads);
  // Block layout: 0 embedding, then 3 per layer, then lm.w lm.b tag.w tag.b.
  Mat& g_embedding = *refs[0].grad;
  Mat& g_lm_w = *refs[1 + 3 * dims.layers].grad;
  Mat& g_lm_b = *refs[2 + 3 * dims.layers].grad;
  Mat& g_tag_w = *refs[3 + 3 * dims.layers].grad;
  Mat& g_tag_b = *refs[4 + 3 * dims.layers].grad;

  if (n == 0) return {};  // empty graph: nothing to differentiate
  SentenceForward fw = run_forward(model, words, tags);

  std::vector<RecurrentCellGrads> cell_grads;
  for (int l = 0; l < dims.layers; ++l) cell_grads.emplace_back(model.cells[l]);

  // Recurrent gradients flowing from step t+1 back into step t.
  std::vector<Vec> dh_next(dims.layers, Vec(dims.hidden, 0.0));
  std::vector<Vec> dc_next(dims.layers, Vec(dims.hidden, 0.0));

  for (int t = n; t >= 0; --t) {
    // Head gradients enter at the top layer.
    Vec dh_top = dh_next[dims.layers - 1];
    const Vec& h_top = fw.caches[t][dims.layers - 1].h;

    kern::tmatvec_acc(model.lm_w, fw.lm_grads[t].data(), dh_top.data());
    kern::outer_acc(g_lm_w, fw.lm_grads[t].data(), h_top.data());
    for (int i = 0; i < model.vocab().size(); ++i) g_lm_b[0][i] += fw.lm_grads[t][i];

    if (!fw.tag_grads[t].empty()) {
      kern::tmatvec_acc(model.tag_w, fw.tag_grads[t].data(), dh_top.data());
      kern::outer_acc(g_tag_w, fw.tag_grads[t].data(), h_top.data());
      for (int i = 0; i < model.tags().size(); ++i) g_tag_b[0][i] += fw.tag_grads[t][i];
    }

    Vec dh = std::move(dh_top);
    for (int l = dims.layers - 1; l >= 0; --l) {
      Vec dx, dh_prev, dc_prev;
      lstm_step_backward(model.cells[l], fw.caches[t][l], dh, dc_next[l], cell_grads[l],
                         dx, dh_prev, dc_prev);
      dh_next[l] = std::move(dh_prev);
      dc_next[l] = std::move(dc_prev);
      if (l > 0) {
        dh = dh_next[l - 1];
        for (int j = 0; j < dims.hidden; ++j) dh[j] += dx[j];
        // dh now carries both the recurrent gradient for layer l-1 at step t
        // and the inter-layer gradient; the recurrent part must not be
        // double-counted when layer l-1 consumes it below.
        dh_next[l - 1].assign(dims.hidden, 0.0);
      } else {
        double* erow = g_embedding[fw.inputs[t]];
        for (int j = 0; j < dims.embed; ++j) erow[j] += dx[j];
      }
    }
  }

  for (int l = 0; l < dims.layers; ++l) {
    Mat& gwx = *refs[1 + 3 * l].grad;
    Mat& gwh = *refs[2 + 3 * l].grad;
    Mat& gb = *refs[3 + 3 * l].grad;
    for (std::size_t i = 0; i < gwx.size(); ++i) gwx.a[i] += cell_grads[l].wx.a[i];
    for (std::size_t i = 0; i < gwh.size(); ++i) gwh.a[i] += cell_grads[l].wh.a[i];
    for (std::size_t i = 0; i < gb.size(); ++i) gb.a[i] += cell_grads[l].b.a[i];
  }
  return fw.loss;
}

std::vector<EpochStats> train(JointModel& model, const SupertaggedCorpus& tagged,
                              const std::vector<std::vector<int>>& plain,
                              const TrainConfig& config, const StepObserver& observer) {
  const std::vector<int> no_tags;

  // Schedule entries: index into tagged (>= 0) or ~index into plain (< 0).
  std::vector<int> schedule;
  for (std::size_t i = 0; i < tagged.sentences.size(); ++i)
    schedule.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < plain.size(); ++i)
    schedule.push_back(-1 - static_cast<int>(i));
  if (schedule.empty()) throw DataError("train: no training sentences");

  std::vector<Mat> grads;
  auto refs = model.param_refs(grads);
  AdamState adam(refs, config.lr);
  Rng shuffle_rng(split_seed(config.seed, 0x5eed));

  // Last-good snapshot for divergence rollback.
  auto snapshot = [&]() {
    std::vector<Mat> copy;
    for (const Mat* b : model.param_blocks()) copy.push_back(*b);
    return copy;
  };
  auto restore = [&](const std::vector<Mat>& copy) {
    auto blocks = model.param_blocks_mut();
    for (std::size_t i = 0; i < blocks.size(); ++i) *blocks[i] = copy[i];
  };
  std::vector<Mat> last_good = snapshot();
  int last_good_epoch = 0;

  std::vector<EpochStats> curves;
  int step_index = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(schedule);
    EpochStats stats;
    stats.epoch = epoch;
    double tag_step_count = 0;
    try {
      for (int entry : schedule) {
        const std::vector<int>* words;
        const std::vector<int>* sent_tags = &no_tags;
        if (entry >= 0) {
          words = &tagged.sentences[entry].words;
          sent_tags = &tagged.sentences[entry].tags;
        } else {
          words = &plain[static_cast<std::size_t>(-1 - entry)];
        }
        if (words->empty()) continue;

        for (Mat& g : grads) g.zero();
        auto loss = backward(model, *words, *sent_tags, grads);
        double total = loss.lm + loss.tag;
        if (!std::isfinite(total))
          throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));

        if (observer) {
          StepRecord rec;
          rec.epoch = epoch;
          rec.step = step_index;
          rec.lm_loss = loss.lm;
          rec.tag_loss = loss.tag;
          rec.total_loss = total;
          rec.has_tags = loss.tag_positions > 0;
          rec.words = words;
          rec.tags = sent_tags;
          observer(model, rec);
        }

        clip_gradients(refs, config.clip);
        adam.step(refs);

        stats.lm_loss += loss.lm;
        stats.total_loss += total;
        if (loss.tag_positions > 0) {
          stats.tag_loss += loss.tag;
          tag_step_count += 1;
        }
        ++stats.steps;
        ++step_index;
      }
    } catch (const NumericError& e) {
      restore(last_good);
      throw NumericError(std::string(e.what()) + "; model rolled back to end of epoch " +
                         std::to_string(last_good_epoch));
    }
    if (stats.steps > 0) {
      stats.lm_loss /= stats.steps;
      stats.total_loss /= stats.steps;
      if (tag_step_count > 0) stats.tag_loss /= tag_step_count;
    }
    curves.push_back(stats);
    last_good = snapshot();
    last_good_epoch = epoch;
  }

  // Checkpoints store 32-bit parameters; match them in memory so scoring
  // before and after a save/load round trip is identical.
  model.quantize_parameters();
  return curves;
}

double evaluate_perplexity(const JointModel& model,
                           const std::vector<std::vector<int>>& corpus) {
  if (corpus.empty()) throw DataError("evaluate_perplexity: empty corpus");
  double ce_sum = 0.0;
  long positions = 0;
  for (const auto& words : corpus) {
    auto loss = model.sentence_loss(words, {});
    ce_sum += loss.lm * loss.lm_positions;
    positions += loss.lm_positions;
  }
  if (positions == 0) throw DataError("evaluate_perplexity: no scoring positions");
  return std::exp(ce_sum / positions);
}

double evaluate_tag_accuracy(const JointModel& model, const SupertaggedCorpus& corpus) {
  long correct = 0, total = 0;
  for (const auto& sent : corpus.sentences) {
    PrefixState state = model.start_state();
    for (std::size_t t = 0; t < sent.words.size(); ++t) {
      model.advance(state, sent.words[t]);
      Vec p = model.tag_posterior(state);
      int best = 0;
      for (int i = 1; i < static_cast<int>(p.size()); ++i)
        if (p[i] > p[best]) best = i;  // ties keep the lowest id
      if (best == sent.tags[t]) ++correct;
      ++total;
    }
  }
  if (total == 0) throw DataError("evaluate_tag_accuracy: empty corpus");
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace sslm
