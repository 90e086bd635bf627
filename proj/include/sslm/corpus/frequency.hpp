#pragma once

#include <string>
#include <vector>

#include "sslm/corpus/vocabulary.hpp"

namespace sslm {

// Unigram counts per vocabulary id; OOV mass accumulates on unk.
struct FrequencyTable {
  std::vector<long> counts;
  long total = 0;

  // Add-one smoothed log frequency: ln((count + 1) / (total + |V|)).
  double log_frequency(int word_id) const;
};

FrequencyTable build_frequency_table(const std::vector<std::string>& corpus_paths,
                                     const Vocabulary& vocab);

}  // namespace sslm
