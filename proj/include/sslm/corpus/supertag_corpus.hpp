#pragma once

#include <string>
#include <vector>

#include "sslm/corpus/vocabulary.hpp"

namespace sslm {

struct TaggedSentence {
  std::vector<int> words;
  std::vector<int> tags;  // same length as words
};

struct SupertaggedCorpus {
  std::vector<TaggedSentence> sentences;
  std::string source_path;
  std::vector<long> word_counts;  // indexed by word id
  std::vector<long> tag_counts;   // indexed by tag id
};

// Reads a "word<TAB>tag" file with blank-line sentence separators. When
// `tags` is empty the inventory is built from the file (first-seen order re-
// sorted by descending count, lexicographic ties); otherwise every tag must
// already be present. OOV words map to unk.
SupertaggedCorpus load_supertag_corpus(const std::string& path, const Vocabulary& vocab,
                                       TagInventory& tags, int max_sentence_len = 200);

// Plain one-sentence-per-line corpus mapped to word ids.
std::vector<std::vector<int>> load_plain_corpus(const std::string& path,
                                                const Vocabulary& vocab,
                                                int max_sentence_len = 200);

}  // namespace sslm
