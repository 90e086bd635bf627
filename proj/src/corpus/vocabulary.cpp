#include "sslm/corpus/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "sslm/util/errors.hpp"

namespace sslm {

Vocabulary::Vocabulary() {
  add(kUnk);
  add(kBos);
  add(kEos);
}

int Vocabulary::add(const std::string& word) {
  auto it = word_to_id_.find(word);
  if (it != word_to_id_.end()) return it->second;
  int id = static_cast<int>(id_to_word_.size());
  word_to_id_.emplace(word, id);
  id_to_word_.push_back(word);
  return id;
}

int Vocabulary::id_of(const std::string& word) const {
  auto it = word_to_id_.find(word);
  return it == word_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(const std::string& word) const {
  return word_to_id_.count(word) > 0;
}

const std::string& Vocabulary::word_of(int id) const {
  if (id < 0 || id >= size())
    throw DataError("vocabulary: id " + std::to_string(id) + " out of range");
  return id_to_word_[id];
}

nlohmann::json Vocabulary::to_json() const {
  return nlohmann::json{{"words", id_to_word_}, {"min_count", min_count_}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  Vocabulary v;
  const auto& words = j.at("words");
  if (words.size() < 3 || words[0] != kUnk || words[1] != kBos || words[2] != kEos)
    throw DataError("vocabulary: reserved symbols missing or reordered");
  for (std::size_t i = 3; i < words.size(); ++i) v.add(words[i].get<std::string>());
  v.min_count_ = j.value("min_count", 1);
  return v;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  return id_to_word_ == other.id_to_word_ && min_count_ == other.min_count_;
}

Vocabulary build_vocabulary(const std::vector<std::string>& corpus_paths, int min_count) {
  // std::map keeps words ordered, which makes the tie-break sort stable
  // without a second pass.
  std::map<std::string, long> counts;
  long total = 0;
  for (const auto& path : corpus_paths) {
    std::ifstream in(path);
    if (!in) throw DataError("build_vocabulary: cannot open corpus file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        ++counts[tok];
        ++total;
      }
    }
  }
  if (total == 0) throw DataError("build_vocabulary: empty corpus");

  std::vector<std::pair<std::string, long>> entries(counts.begin(), counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.set_min_count(min_count);
  for (const auto& [word, count] : entries) {
    if (count < min_count) continue;
    vocab.add(word);
  }
  return vocab;
}

int TagInventory::add(const std::string& tag) {
  auto it = tag_to_id_.find(tag);
  if (it != tag_to_id_.end()) return it->second;
  int id = static_cast<int>(id_to_tag_.size());
  tag_to_id_.emplace(tag, id);
  id_to_tag_.push_back(tag);
  return id;
}

int TagInventory::id_of(const std::string& tag) const {
  auto it = tag_to_id_.find(tag);
  if (it == tag_to_id_.end())
    throw DataError("tag inventory: unseen supertag '" + tag + "'");
  return it->second;
}

bool TagInventory::contains(const std::string& tag) const {
  return tag_to_id_.count(tag) > 0;
}

const std::string& TagInventory::tag_of(int id) const {
  if (id < 0 || id >= size())
    throw DataError("tag inventory: id " + std::to_string(id) + " out of range");
  return id_to_tag_[id];
}

nlohmann::json TagInventory::to_json() const {
  return nlohmann::json{{"tags", id_to_tag_}};
}

TagInventory TagInventory::from_json(const nlohmann::json& j) {
  TagInventory t;
  for (const auto& tag : j.at("tags")) t.add(tag.get<std::string>());
  return t;
}

bool TagInventory::operator==(const TagInventory& other) const {
  return id_to_tag_ == other.id_to_tag_;
}

}  // namespace sslm
