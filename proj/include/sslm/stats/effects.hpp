#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sslm/corpus/items.hpp"
#include "sslm/stats/bootstrap.hpp"

namespace sslm {

enum class Region { PRE, DISAMBIG, SPILL1, SPILL2 };
std::string to_string(Region r);
inline const Region kAllRegions[] = {Region::PRE, Region::DISAMBIG, Region::SPILL1,
                                     Region::SPILL2};

// Token index of a region for one item row, or nothing when it falls
// outside the sentence.
std::optional<int> region_token(const ExperimentalItem& item, Region region);

struct EffectEstimate {
  Construction construction = Construction::FILLER;
  Region region = Region::DISAMBIG;
  std::string source;  // "human", a conversion variant, or a surprisal measure
  double effect = 0.0;  // ambiguous mean - unambiguous mean
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n_resamples = 0;
};

// A measurement attached to (unit, item, condition, token). Units are
// participants for reading times and items for surprisal differences.
struct ValueRow {
  std::string unit;
  int item_id = 0;
  Condition condition = Condition::NA;
  int token_index = 0;
  double value = 0.0;
};

// Grand-mean ambiguous-minus-unambiguous difference at the region token of
// each item of the construction, with a percentile bootstrap over units.
// Every item must be observed in both conditions.
EffectEstimate garden_path_effect(const std::vector<ValueRow>& data, const ItemsFile& items,
                                  Construction construction, Region region,
                                  const std::string& source, int n_resamples,
                                  std::uint64_t seed);

void write_effects_csv(const std::string& path, const std::vector<EffectEstimate>& effects);

}  // namespace sslm
