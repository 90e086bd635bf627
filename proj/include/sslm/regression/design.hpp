#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sslm/corpus/frequency.hpp"
#include "sslm/corpus/items.hpp"
#include "sslm/corpus/rt_data.hpp"
#include "sslm/nn/tensor.hpp"
#include "sslm/surprisal/engine.hpp"

namespace sslm {

enum class LmmVariant { NEITHER, LEXICAL, SYNTACTIC, BOTH };
std::string to_string(LmmVariant v);
LmmVariant variant_from_string(const std::string& s);
inline const LmmVariant kAllVariants[] = {LmmVariant::NEITHER, LmmVariant::LEXICAL,
                                          LmmVariant::SYNTACTIC, LmmVariant::BOTH};

// Standardization constants, one pair per measure (shared across lags of
// the same measure so scaling a measure by a constant cancels exactly).
// Computed on filler rows and reused verbatim for critical rows.
struct ScalingConstants {
  double lex_mean = 0, lex_sd = 1;
  double syn_mean = 0, syn_sd = 1;
  double freq_mean = 0, freq_sd = 1;
  double len_mean = 0, len_sd = 1;
  double pos_mean = 0, pos_sd = 1;

  nlohmann::json to_json() const;
  static ScalingConstants from_json(const nlohmann::json& j);
};

// One RT observation with every candidate predictor, already z-scored.
// Index 0 is the current word, 1 and 2 the two prior words; missing lags at
// the sentence start are 0, the post-centering mean.
struct FeatureRow {
  std::string participant;
  int item_id = 0;
  Condition condition = Condition::NA;
  Construction construction = Construction::FILLER;
  int token_index = 0;
  double rt = 0.0;
  double s_lex[3] = {0, 0, 0};
  double s_syn[3] = {0, 0, 0};
  double freq[3] = {0, 0, 0};
  double len[3] = {0, 0, 0};
  double pos = 0.0;
  bool lag_filled = false;  // any lag feature imputed
  bool oov = false;         // current or lagged token scored against unk
};

struct FeatureTable {
  std::vector<FeatureRow> rows;
  ScalingConstants scaling;
};

// Joins RT observations with surprisal records, frequencies, lengths and
// positions. Scaling constants come from the filler rows unless `reuse` is
// given. Throws DataError when an observed RT has no surprisal record.
FeatureTable build_features(const ItemsFile& items, const std::vector<RtObservation>& rt,
                            const std::vector<SurprisalRecord>& records,
                            const FrequencyTable& freq, const Vocabulary& vocab,
                            const ScalingConstants* reuse = nullptr);

// Fixed-effect matrix for one conversion variant plus the random-effect
// layout (by-item intercept and slopes for the variant's surprisal columns,
// by-participant intercept).
struct DesignMatrix {
  LmmVariant variant = LmmVariant::NEITHER;
  std::vector<std::string> col_names;  // col 0 is "(intercept)"
  Mat x;                               // n x p
  Vec y;
  std::vector<std::string> item_of_row;
  std::vector<std::string> participant_of_row;
  std::vector<std::string> item_slope_cols;  // names of by-item slope columns
  std::vector<const FeatureRow*> meta;       // into the owning FeatureTable
};

DesignMatrix build_design(const FeatureTable& features, LmmVariant variant);

}  // namespace sslm
