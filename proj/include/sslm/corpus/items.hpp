#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sslm {

enum class Construction { MVRR, NPS, NPZ, FILLER };
enum class Condition { AMBIGUOUS, UNAMBIGUOUS, NA };

std::string to_string(Construction c);
std::string to_string(Condition c);
Construction construction_from_string(const std::string& s);
Condition condition_from_string(const std::string& s);

// One row of the items file. Critical items come in ambiguous/unambiguous
// pairs sharing item_id and construction; fillers have condition NA and no
// disambiguating index.
struct ExperimentalItem {
  int item_id = 0;
  Construction construction = Construction::FILLER;
  Condition condition = Condition::NA;
  std::vector<std::string> tokens;
  std::optional<int> disambig_index;
  std::vector<int> spillover_indices;  // disambig+1, +2, clipped to length

  bool is_filler() const { return construction == Construction::FILLER; }
};

struct ItemsFile {
  std::vector<ExperimentalItem> items;
  std::vector<std::string> warnings;

  const ExperimentalItem* find(int item_id, Condition cond) const;
};

// CSV columns: item_id,construction,condition,sentence,disambig_index.
// Validates pairing of non-filler items and index bounds.
ItemsFile load_items(const std::string& path);

}  // namespace sslm
