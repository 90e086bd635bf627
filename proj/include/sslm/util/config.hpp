#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sslm {

// Flat key=value configuration file. '#' starts a comment, blank lines are
// skipped, later keys override earlier ones.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback = "") const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::vector<std::uint64_t> get_seed_list(const std::string& key,
                                           const std::vector<std::uint64_t>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace sslm
