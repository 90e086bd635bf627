#include "sslm/corpus/items.hpp"

#include <map>
#include <sstream>

#include "sslm/util/csv.hpp"
#include "sslm/util/errors.hpp"

namespace sslm {

std::string to_string(Construction c) {
  switch (c) {
    case Construction::MVRR: return "MVRR";
    case Construction::NPS: return "NPS";
    case Construction::NPZ: return "NPZ";
    case Construction::FILLER: return "FILLER";
  }
  return "?";
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::AMBIGUOUS: return "ambiguous";
    case Condition::UNAMBIGUOUS: return "unambiguous";
    case Condition::NA: return "na";
  }
  return "?";
}

Construction construction_from_string(const std::string& s) {
  if (s == "MVRR") return Construction::MVRR;
  if (s == "NPS") return Construction::NPS;
  if (s == "NPZ") return Construction::NPZ;
  if (s == "FILLER") return Construction::FILLER;
  throw DataError("unknown construction: '" + s + "'");
}

Condition condition_from_string(const std::string& s) {
  if (s == "ambiguous") return Condition::AMBIGUOUS;
  if (s == "unambiguous") return Condition::UNAMBIGUOUS;
  if (s == "na" || s == "NA" || s.empty()) return Condition::NA;
  throw DataError("unknown condition: '" + s + "'");
}

const ExperimentalItem* ItemsFile::find(int item_id, Condition cond) const {
  for (const auto& item : items)
    if (item.item_id == item_id && item.condition == cond) return &item;
  return nullptr;
}

ItemsFile load_items(const std::string& path) {
  CsvTable table = read_csv(path);
  if (table.header.empty()) throw DataError("load_items: empty items file: " + path);
  int c_id = table.require_column("item_id");
  int c_constr = table.require_column("construction");
  int c_cond = table.require_column("condition");
  int c_sent = table.require_column("sentence");
  int c_dis = table.require_column("disambig_index");

  ItemsFile out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size())
      throw DataError("load_items: row " + std::to_string(r + 2) +
                      " has wrong field count");
    ExperimentalItem item;
    item.item_id = std::stoi(row[c_id]);
    item.construction = construction_from_string(row[c_constr]);
    item.condition = condition_from_string(row[c_cond]);

    std::istringstream ss(row[c_sent]);
    std::string tok;
    while (ss >> tok) item.tokens.push_back(tok);
    if (item.tokens.empty())
      throw DataError("load_items: row " + std::to_string(r + 2) + " has empty sentence");

    const std::string& dis = row[c_dis];
    if (!dis.empty()) {
      int idx = std::stoi(dis);
      if (idx < 0 || idx >= static_cast<int>(item.tokens.size()))
        throw DataError("load_items: item " + std::to_string(item.item_id) + " (" +
                        to_string(item.condition) + "): disambig_index " + dis +
                        " out of bounds");
      item.disambig_index = idx;
      for (int k = 1; k <= 2; ++k)
        if (idx + k < static_cast<int>(item.tokens.size()))
          item.spillover_indices.push_back(idx + k);
      if (item.spillover_indices.empty())
        out.warnings.push_back("item " + std::to_string(item.item_id) + " (" +
                               to_string(item.condition) +
                               "): disambiguating word is sentence-final, no spillover region");
    } else if (!item.is_filler()) {
      throw DataError("load_items: non-filler item " + std::to_string(item.item_id) +
                      " lacks disambig_index");
    }
    out.items.push_back(std::move(item));
  }

  // Non-filler items must form complete ambiguous/unambiguous pairs.
  std::map<int, std::vector<const ExperimentalItem*>> by_id;
  for (const auto& item : out.items)
    if (!item.is_filler()) by_id[item.item_id].push_back(&item);
  for (const auto& [id, members] : by_id) {
    bool has_amb = false, has_unamb = false;
    for (const auto* m : members) {
      if (m->condition == Condition::AMBIGUOUS) has_amb = true;
      if (m->condition == Condition::UNAMBIGUOUS) has_unamb = true;
      if (m->construction != members.front()->construction)
        throw DataError("load_items: item " + std::to_string(id) +
                        " mixes constructions across conditions");
    }
    if (!has_amb || !has_unamb)
      throw DataError("load_items: item " + std::to_string(id) +
                      " is missing one condition of its ambiguous/unambiguous pair");
  }
  return out;
}

}  // namespace sslm
