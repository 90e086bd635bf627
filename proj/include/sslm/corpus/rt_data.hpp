#pragma once

#include <string>
#include <vector>

#include "sslm/corpus/items.hpp"

namespace sslm {

// One self-paced-reading measurement. `condition` identifies which member
// of an item pair the participant read; filler rows carry NA. The loader
// accepts files without the condition column (all rows then default to NA),
// which is sufficient for filler-only files.
struct RtObservation {
  std::string participant_id;
  int item_id = 0;
  Condition condition = Condition::NA;
  int token_index = 0;
  double rt_ms = 0.0;
};

// CSV columns: participant_id,item_id,token_index,rt_ms[,condition].
// Enforces rt_ms > 0 and uniqueness of (participant, item, condition, token).
std::vector<RtObservation> load_rt_observations(const std::string& path);

void write_rt_observations(const std::string& path,
                           const std::vector<RtObservation>& rows);

}  // namespace sslm
