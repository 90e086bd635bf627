#include "sslm/util/config.hpp"

#include <fstream>
#include <sstream>

#include "sslm/util/errors.hpp"

namespace sslm {

static std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw DataError("config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw DataError("config: missing required key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw DataError("config: key '" + key + "' is not a number: " + it->second);
  }
}

long Config::get_int(const std::string& key, long fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stol(it->second);
  } catch (const std::exception&) {
    throw DataError("config: key '" + key + "' is not an integer: " + it->second);
  }
}

std::vector<std::uint64_t> Config::get_seed_list(
    const std::string& key, const std::vector<std::uint64_t>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<std::uint64_t> seeds;
  std::istringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    seeds.push_back(std::stoull(tok));
  }
  if (seeds.empty()) throw DataError("config: key '" + key + "' has an empty seed list");
  return seeds;
}

}  // namespace sslm
