#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace sslm {

// Word <-> id map with reserved <unk>/<bos>/<eos> symbols. Ids are assigned
// by descending corpus count with lexicographic tie-breaks, so two builds
// over the same inputs produce identical tables.
class Vocabulary {
 public:
  static constexpr int kUnkId = 0;
  static constexpr int kBosId = 1;
  static constexpr int kEosId = 2;
  static constexpr const char* kUnk = "<unk>";
  static constexpr const char* kBos = "<bos>";
  static constexpr const char* kEos = "<eos>";

  Vocabulary();

  // Adds a retained word; returns its id.
  int add(const std::string& word);

  int id_of(const std::string& word) const;  // OOV -> unk id
  bool contains(const std::string& word) const;
  const std::string& word_of(int id) const;
  int size() const { return static_cast<int>(id_to_word_.size()); }

  int unk_id() const { return kUnkId; }
  int bos_id() const { return kBosId; }
  int eos_id() const { return kEosId; }
  int min_count() const { return min_count_; }
  void set_min_count(int m) { min_count_ = m; }

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

  bool operator==(const Vocabulary& other) const;

 private:
  std::unordered_map<std::string, int> word_to_id_;
  std::vector<std::string> id_to_word_;
  int min_count_ = 1;
};

// Counts whitespace tokens in the given files (one sentence per line) and
// retains words with count >= min_count. Throws DataError on unreadable
// files or an empty corpus.
Vocabulary build_vocabulary(const std::vector<std::string>& corpus_paths, int min_count);

// Supertag <-> id map. The set is closed at build time; there is no unknown
// tag, lookups of unseen tags are a hard error.
class TagInventory {
 public:
  int add(const std::string& tag);           // idempotent
  int id_of(const std::string& tag) const;   // throws DataError when unseen
  bool contains(const std::string& tag) const;
  const std::string& tag_of(int id) const;
  int size() const { return static_cast<int>(id_to_tag_.size()); }

  nlohmann::json to_json() const;
  static TagInventory from_json(const nlohmann::json& j);

  bool operator==(const TagInventory& other) const;

 private:
  std::unordered_map<std::string, int> tag_to_id_;
  std::vector<std::string> id_to_tag_;
};

}  // namespace sslm
