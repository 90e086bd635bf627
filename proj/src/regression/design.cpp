#include "sslm/regression/design.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "sslm/util/errors.hpp"

namespace sslm {

std::string to_string(LmmVariant v) {
  switch (v) {
    case LmmVariant::NEITHER: return "neither";
    case LmmVariant::LEXICAL: return "lexical";
    case LmmVariant::SYNTACTIC: return "syntactic";
    case LmmVariant::BOTH: return "both";
  }
  return "?";
}

LmmVariant variant_from_string(const std::string& s) {
  if (s == "neither") return LmmVariant::NEITHER;
  if (s == "lexical") return LmmVariant::LEXICAL;
  if (s == "syntactic") return LmmVariant::SYNTACTIC;
  if (s == "both") return LmmVariant::BOTH;
  throw DataError("unknown conversion variant: '" + s + "'");
}

nlohmann::json ScalingConstants::to_json() const {
  return {{"lex_mean", lex_mean},   {"lex_sd", lex_sd},   {"syn_mean", syn_mean},
          {"syn_sd", syn_sd},       {"freq_mean", freq_mean}, {"freq_sd", freq_sd},
          {"len_mean", len_mean},   {"len_sd", len_sd},   {"pos_mean", pos_mean},
          {"pos_sd", pos_sd}};
}

ScalingConstants ScalingConstants::from_json(const nlohmann::json& j) {
  ScalingConstants s;
  s.lex_mean = j.at("lex_mean");
  s.lex_sd = j.at("lex_sd");
  s.syn_mean = j.at("syn_mean");
  s.syn_sd = j.at("syn_sd");
  s.freq_mean = j.at("freq_mean");
  s.freq_sd = j.at("freq_sd");
  s.len_mean = j.at("len_mean");
  s.len_sd = j.at("len_sd");
  s.pos_mean = j.at("pos_mean");
  s.pos_sd = j.at("pos_sd");
  return s;
}

namespace {

struct RawToken {
  double s_lex, s_syn, freq, len;
  bool oov;
};

struct MeanSd {
  double mean = 0, sd = 1;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd out;
  if (v.empty()) return out;
  double sum = 0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double sq = 0;
    for (double x : v) sq += (x - out.mean) * (x - out.mean);
    double sd = std::sqrt(sq / static_cast<double>(v.size() - 1));
    out.sd = sd > 0 ? sd : 1.0;
  }
  return out;
}

}  // namespace

FeatureTable build_features(const ItemsFile& items, const std::vector<RtObservation>& rt,
                            const std::vector<SurprisalRecord>& records,
                            const FrequencyTable& freq, const Vocabulary& vocab,
                            const ScalingConstants* reuse) {
  // Per-token feature cache keyed by (item, condition, token index).
  std::map<std::tuple<int, int, int>, RawToken> tokens;
  for (const auto& rec : records) {
    RawToken t;
    t.s_lex = rec.surp_lex;
    t.s_syn = rec.surp_syn;
    t.freq = freq.log_frequency(vocab.id_of(rec.token));
    t.len = static_cast<double>(rec.token.size());
    t.oov = rec.oov;
    tokens[{rec.item_id, static_cast<int>(rec.condition), rec.token_index}] = t;
  }

  std::map<std::pair<int, int>, const ExperimentalItem*> item_index;
  for (const auto& item : items.items)
    item_index[{item.item_id, static_cast<int>(item.condition)}] = &item;

  FeatureTable table;
  // First pass collects raw rows so the scaling pass can see filler values.
  struct RawRow {
    FeatureRow row;
    RawToken tok[3];
    bool has_lag[3] = {true, false, false};
  };
  std::vector<RawRow> raw;
  raw.reserve(rt.size());
  for (const auto& obs : rt) {
    auto item_it = item_index.find({obs.item_id, static_cast<int>(obs.condition)});
    if (item_it == item_index.end())
      throw DataError("build_features: RT observation references unknown item " +
                      std::to_string(obs.item_id) + " (" + to_string(obs.condition) + ")");
    const ExperimentalItem& item = *item_it->second;

    RawRow rr;
    rr.row.participant = obs.participant_id;
    rr.row.item_id = obs.item_id;
    rr.row.condition = obs.condition;
    rr.row.construction = item.construction;
    rr.row.token_index = obs.token_index;
    rr.row.rt = obs.rt_ms;
    rr.row.pos = static_cast<double>(obs.token_index);

    for (int lag = 0; lag < 3; ++lag) {
      int idx = obs.token_index - lag;
      if (idx < 0) {
        rr.has_lag[lag] = false;
        continue;
      }
      auto tok_it = tokens.find({obs.item_id, static_cast<int>(obs.condition), idx});
      if (tok_it == tokens.end()) {
        if (lag == 0)
          throw DataError("build_features: no surprisal record for item " +
                          std::to_string(obs.item_id) + " (" + to_string(obs.condition) +
                          ") token " + std::to_string(obs.token_index));
        rr.has_lag[lag] = false;
        continue;
      }
      rr.has_lag[lag] = true;
      rr.tok[lag] = tok_it->second;
    }
    raw.push_back(std::move(rr));
  }

  if (reuse != nullptr) {
    table.scaling = *reuse;
  } else {
    std::vector<double> lex, syn, fr, ln, pos;
    for (const auto& rr : raw) {
      if (rr.row.construction != Construction::FILLER) continue;
      lex.push_back(rr.tok[0].s_lex);
      syn.push_back(rr.tok[0].s_syn);
      fr.push_back(rr.tok[0].freq);
      ln.push_back(rr.tok[0].len);
      pos.push_back(rr.row.pos);
    }
    if (lex.empty())
      throw DataError("build_features: no filler rows to compute scaling constants");
    auto m1 = mean_sd(lex), m2 = mean_sd(syn), m3 = mean_sd(fr), m4 = mean_sd(ln),
         m5 = mean_sd(pos);
    table.scaling = ScalingConstants{m1.mean, m1.sd, m2.mean, m2.sd, m3.mean, m3.sd,
                                     m4.mean, m4.sd, m5.mean, m5.sd};
  }
  const ScalingConstants& sc = table.scaling;

  table.rows.reserve(raw.size());
  for (auto& rr : raw) {
    FeatureRow row = rr.row;
    row.pos = (row.pos - sc.pos_mean) / sc.pos_sd;
    for (int lag = 0; lag < 3; ++lag) {
      if (!rr.has_lag[lag]) {
        if (lag > 0) row.lag_filled = true;
        continue;  // features stay 0, the post-centering mean
      }
      row.s_lex[lag] = (rr.tok[lag].s_lex - sc.lex_mean) / sc.lex_sd;
      row.s_syn[lag] = (rr.tok[lag].s_syn - sc.syn_mean) / sc.syn_sd;
      row.freq[lag] = (rr.tok[lag].freq - sc.freq_mean) / sc.freq_sd;
      row.len[lag] = (rr.tok[lag].len - sc.len_mean) / sc.len_sd;
      if (rr.tok[lag].oov) row.oov = true;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

DesignMatrix build_design(const FeatureTable& features, LmmVariant variant) {
  const bool with_lex = variant == LmmVariant::LEXICAL || variant == LmmVariant::BOTH;
  const bool with_syn = variant == LmmVariant::SYNTACTIC || variant == LmmVariant::BOTH;

  DesignMatrix dm;
  dm.variant = variant;
  dm.col_names.push_back("(intercept)");
  if (with_lex)
    for (int lag = 0; lag < 3; ++lag)
      dm.col_names.push_back("s_lex_" + std::to_string(lag));
  if (with_syn)
    for (int lag = 0; lag < 3; ++lag)
      dm.col_names.push_back("s_syn_" + std::to_string(lag));
  for (int lag = 0; lag < 3; ++lag) {
    dm.col_names.push_back("f_" + std::to_string(lag));
    dm.col_names.push_back("len_" + std::to_string(lag));
    dm.col_names.push_back("f_" + std::to_string(lag) + ":len_" + std::to_string(lag));
  }
  dm.col_names.push_back("pos");

  const int n = static_cast<int>(features.rows.size());
  const int p = static_cast<int>(dm.col_names.size());
  dm.x = Mat(n, p);
  dm.y.resize(n);
  dm.item_of_row.resize(n);
  dm.participant_of_row.resize(n);
  dm.meta.resize(n);

  for (int r = 0; r < n; ++r) {
    const FeatureRow& row = features.rows[r];
    double* xr = dm.x[r];
    int c = 0;
    xr[c++] = 1.0;
    if (with_lex)
      for (int lag = 0; lag < 3; ++lag) xr[c++] = row.s_lex[lag];
    if (with_syn)
      for (int lag = 0; lag < 3; ++lag) xr[c++] = row.s_syn[lag];
    for (int lag = 0; lag < 3; ++lag) {
      xr[c++] = row.freq[lag];
      xr[c++] = row.len[lag];
      xr[c++] = row.freq[lag] * row.len[lag];
    }
    xr[c++] = row.pos;
    dm.y[r] = row.rt;
    dm.item_of_row[r] = std::to_string(row.item_id);
    dm.participant_of_row[r] = row.participant;
    dm.meta[r] = &row;
  }

  if (with_lex)
    for (int lag = 0; lag < 3; ++lag)
      dm.item_slope_cols.push_back("s_lex_" + std::to_string(lag));
  if (with_syn)
    for (int lag = 0; lag < 3; ++lag)
      dm.item_slope_cols.push_back("s_syn_" + std::to_string(lag));
  return dm;
}

}  // namespace sslm
