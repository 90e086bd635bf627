#include "sslm/stats/effects.hpp"

#include <map>
#include <set>

#include "sslm/util/csv.hpp"
#include "sslm/util/errors.hpp"

namespace sslm {

std::string to_string(Region r) {
  switch (r) {
    case Region::PRE: return "pre";
    case Region::DISAMBIG: return "disambig";
    case Region::SPILL1: return "spill1";
    case Region::SPILL2: return "spill2";
  }
  return "?";
}

std::optional<int> region_token(const ExperimentalItem& item, Region region) {
  if (!item.disambig_index.has_value()) return std::nullopt;
  int d = *item.disambig_index;
  int idx = d;
  switch (region) {
    case Region::PRE: idx = d - 1; break;
    case Region::DISAMBIG: idx = d; break;
    case Region::SPILL1: idx = d + 1; break;
    case Region::SPILL2: idx = d + 2; break;
  }
  if (idx < 0 || idx >= static_cast<int>(item.tokens.size())) return std::nullopt;
  return idx;
}

EffectEstimate garden_path_effect(const std::vector<ValueRow>& data, const ItemsFile& items,
                                  Construction construction, Region region,
                                  const std::string& source, int n_resamples,
                                  std::uint64_t seed) {
  // Region token per (item, condition) of this construction.
  std::map<std::pair<int, int>, int> region_index;
  std::set<int> item_ids;
  for (const auto& item : items.items) {
    if (item.construction != construction || item.is_filler()) continue;
    auto idx = region_token(item, region);
    if (!idx.has_value()) continue;
    region_index[{item.item_id, static_cast<int>(item.condition)}] = *idx;
    item_ids.insert(item.item_id);
  }
  if (region_index.empty())
    throw DataError("garden_path_effect: no " + to_string(construction) +
                    " items with a " + to_string(region) + " region");

  // Per-unit cell values at the region.
  struct Cells {
    std::vector<double> amb, unamb;
  };
  std::map<std::string, Cells> by_unit;
  std::set<int> seen_amb, seen_unamb;
  for (const auto& row : data) {
    auto it = region_index.find({row.item_id, static_cast<int>(row.condition)});
    if (it == region_index.end() || it->second != row.token_index) continue;
    if (row.condition == Condition::AMBIGUOUS) {
      by_unit[row.unit].amb.push_back(row.value);
      seen_amb.insert(row.item_id);
    } else if (row.condition == Condition::UNAMBIGUOUS) {
      by_unit[row.unit].unamb.push_back(row.value);
      seen_unamb.insert(row.item_id);
    }
  }
  for (int id : item_ids)
    if (seen_amb.count(id) != seen_unamb.count(id))
      throw DataError("garden_path_effect: item " + std::to_string(id) +
                      " observed in only one condition");

  std::vector<const Cells*> units;
  for (const auto& [unit, cells] : by_unit) units.push_back(&cells);
  if (units.size() < 2)
    throw DataError("garden_path_effect: need at least 2 units with observations");

  auto statistic = [&](const std::vector<int>& draw) {
    double amb_sum = 0, unamb_sum = 0;
    long amb_n = 0, unamb_n = 0;
    for (int u : draw) {
      for (double v : units[u]->amb) {
        amb_sum += v;
        ++amb_n;
      }
      for (double v : units[u]->unamb) {
        unamb_sum += v;
        ++unamb_n;
      }
    }
    if (amb_n == 0 || unamb_n == 0) return 0.0;
    return amb_sum / amb_n - unamb_sum / unamb_n;
  };

  std::vector<int> all_units(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) all_units[i] = static_cast<int>(i);

  EffectEstimate est;
  est.construction = construction;
  est.region = region;
  est.source = source;
  est.effect = statistic(all_units);
  BootstrapCi ci = bootstrap_ci(static_cast<int>(units.size()), statistic, n_resamples, seed);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.n_resamples = ci.n_resamples;
  if (est.effect < est.ci_low - 1e-9 || est.effect > est.ci_high + 1e-9)
    throw NumericError("garden_path_effect: point estimate escaped its bootstrap CI");
  return est;
}

void write_effects_csv(const std::string& path, const std::vector<EffectEstimate>& effects) {
  CsvWriter out(path);
  out.write_row({"construction", "region", "source", "effect_ms", "ci_low", "ci_high"});
  for (const auto& e : effects)
    out.write_row({to_string(e.construction), to_string(e.region), e.source,
                   format_double(e.effect), format_double(e.ci_low),
                   format_double(e.ci_high)});
}

}  // namespace sslm
