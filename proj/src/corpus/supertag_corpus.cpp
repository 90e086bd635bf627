#include "sslm/corpus/supertag_corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "sslm/util/errors.hpp"

namespace sslm {

SupertaggedCorpus load_supertag_corpus(const std::string& path, const Vocabulary& vocab,
                                       TagInventory& tags, int max_sentence_len) {
  std::ifstream in(path);
  if (!in) throw DataError("load_supertag_corpus: cannot open file: " + path);

  const bool build_inventory = tags.size() == 0;

  // Raw string pass first: the inventory order must depend only on tag
  // counts, not on the inventory build order.
  std::vector<std::vector<std::pair<std::string, std::string>>> raw;
  std::vector<std::pair<std::string, std::string>> current;
  std::map<std::string, long> raw_tag_counts;
  std::string line;
  int lineno = 0;
  auto flush_sentence = [&]() {
    if (current.empty()) return;
    if (static_cast<int>(current.size()) > max_sentence_len)
      throw DataError("load_supertag_corpus: sentence ending at line " +
                      std::to_string(lineno) + " exceeds max length " +
                      std::to_string(max_sentence_len));
    raw.push_back(std::move(current));
    current.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush_sentence();
      continue;
    }
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw DataError("load_supertag_corpus: line " + std::to_string(lineno) +
                      ": expected exactly one tab (word<TAB>tag)");
    std::string word = line.substr(0, tab);
    std::string tag = line.substr(tab + 1);
    if (word.empty())
      throw DataError("load_supertag_corpus: line " + std::to_string(lineno) +
                      ": empty word");
    if (tag.empty())
      throw DataError("load_supertag_corpus: line " + std::to_string(lineno) +
                      ": empty tag");
    ++raw_tag_counts[tag];
    current.emplace_back(std::move(word), std::move(tag));
  }
  flush_sentence();

  if (build_inventory) {
    std::vector<std::pair<std::string, long>> entries(raw_tag_counts.begin(),
                                                      raw_tag_counts.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (const auto& [tag, _] : entries) tags.add(tag);
  }

  SupertaggedCorpus corpus;
  corpus.source_path = path;
  corpus.word_counts.assign(vocab.size(), 0);
  corpus.tag_counts.assign(tags.size(), 0);
  for (auto& sent : raw) {
    TaggedSentence ts;
    ts.words.reserve(sent.size());
    ts.tags.reserve(sent.size());
    for (auto& [word, tag] : sent) {
      int wid = vocab.id_of(word);
      int tid = tags.id_of(tag);  // throws on unseen tag when inventory given
      ts.words.push_back(wid);
      ts.tags.push_back(tid);
      ++corpus.word_counts[wid];
      ++corpus.tag_counts[tid];
    }
    corpus.sentences.push_back(std::move(ts));
  }
  return corpus;
}

std::vector<std::vector<int>> load_plain_corpus(const std::string& path,
                                                const Vocabulary& vocab,
                                                int max_sentence_len) {
  std::ifstream in(path);
  if (!in) throw DataError("load_plain_corpus: cannot open file: " + path);
  std::vector<std::vector<int>> sentences;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<int> ids;
    std::string tok;
    while (ls >> tok) ids.push_back(vocab.id_of(tok));
    if (ids.empty()) continue;
    if (static_cast<int>(ids.size()) > max_sentence_len)
      throw DataError("load_plain_corpus: line " + std::to_string(lineno) +
                      " exceeds max sentence length");
    sentences.push_back(std::move(ids));
  }
  return sentences;
}

}  // namespace sslm
