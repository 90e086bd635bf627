#include "sslm/corpus/frequency.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sslm/util/errors.hpp"

namespace sslm {

double FrequencyTable::log_frequency(int word_id) const {
  long c = (word_id >= 0 && word_id < static_cast<int>(counts.size()))
               ? counts[word_id]
               : 0;
  return std::log(static_cast<double>(c + 1) /
                  static_cast<double>(total + static_cast<long>(counts.size())));
}

FrequencyTable build_frequency_table(const std::vector<std::string>& corpus_paths,
                                     const Vocabulary& vocab) {
  FrequencyTable table;
  table.counts.assign(vocab.size(), 0);
  for (const auto& path : corpus_paths) {
    std::ifstream in(path);
    if (!in) throw DataError("build_frequency_table: cannot open corpus file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        ++table.counts[vocab.id_of(tok)];
        ++table.total;
      }
    }
  }
  if (table.total == 0) throw DataError("build_frequency_table: empty corpus");
  return table;
}

}  // namespace sslm
