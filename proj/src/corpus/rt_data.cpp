#include "sslm/corpus/rt_data.hpp"

#include <set>
#include <tuple>

#include "sslm/util/csv.hpp"
#include "sslm/util/errors.hpp"

namespace sslm {

std::vector<RtObservation> load_rt_observations(const std::string& path) {
  CsvTable table = read_csv(path);
  if (table.header.empty()) throw DataError("load_rt_observations: empty file: " + path);
  int c_part = table.require_column("participant_id");
  int c_item = table.require_column("item_id");
  int c_tok = table.require_column("token_index");
  int c_rt = table.require_column("rt_ms");
  int c_cond = table.column("condition");

  std::vector<RtObservation> rows;
  std::set<std::tuple<std::string, int, int, int>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    RtObservation obs;
    obs.participant_id = row[c_part];
    obs.item_id = std::stoi(row[c_item]);
    obs.token_index = std::stoi(row[c_tok]);
    obs.rt_ms = std::stod(row[c_rt]);
    if (c_cond >= 0) obs.condition = condition_from_string(row[c_cond]);
    if (!(obs.rt_ms > 0.0))
      throw DataError("load_rt_observations: row " + std::to_string(r + 2) +
                      ": rt_ms must be positive");
    auto key = std::make_tuple(obs.participant_id, obs.item_id,
                               static_cast<int>(obs.condition), obs.token_index);
    if (!seen.insert(key).second)
      throw DataError("load_rt_observations: duplicate (participant, item, condition, "
                      "token) at row " + std::to_string(r + 2));
    rows.push_back(std::move(obs));
  }
  return rows;
}

void write_rt_observations(const std::string& path,
                           const std::vector<RtObservation>& rows) {
  CsvWriter out(path);
  out.write_row({"participant_id", "item_id", "token_index", "rt_ms", "condition"});
  for (const auto& obs : rows)
    out.write_row({obs.participant_id, std::to_string(obs.item_id),
                   std::to_string(obs.token_index), format_double(obs.rt_ms),
                   to_string(obs.condition)});
}

}  // namespace sslm
