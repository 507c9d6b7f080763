#include "colonpose/config.hpp"

#include <fstream>
#include <sstream>

namespace colonpose {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  KeyValueConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (key.empty()) throw ConfigError("config: empty key");
  values_[key] = value;
}

void KeyValueConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must have the form key=value: " + assignment);
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  const std::string v = it == values_.end() ? fallback : it->second;
  consumed_[key] = v;
  return v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    consumed_[key] = std::to_string(fallback);
    return fallback;
  }
  std::istringstream ss(it->second);
  double v;
  if (!(ss >> v)) throw ConfigError("config: key '" + key + "' is not a number: " + it->second);
  consumed_[key] = it->second;
  return v;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  const int i = static_cast<int>(v);
  if (v != i) throw ConfigError("config: key '" + key + "' must be an integer");
  return i;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    consumed_[key] = std::to_string(fallback);
    return fallback;
  }
  std::istringstream ss(it->second);
  std::uint64_t v;
  if (!(ss >> v)) throw ConfigError("config: key '" + key + "' is not an unsigned integer");
  consumed_[key] = it->second;
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    consumed_[key] = fallback ? "1" : "0";
    return fallback;
  }
  consumed_[key] = it->second;
  if (it->second == "1" || it->second == "true" || it->second == "on") return true;
  if (it->second == "0" || it->second == "false" || it->second == "off") return false;
  throw ConfigError("config: key '" + key + "' must be a boolean (0/1/true/false)");
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key,
                                              const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    std::string text;
    for (int v : fallback) text += (text.empty() ? "" : ",") + std::to_string(v);
    consumed_[key] = text;
    return fallback;
  }
  consumed_[key] = it->second;
  std::vector<int> out;
  std::istringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("config: key '" + key + "' has a non-integer entry: " + tok);
    }
  }
  return out;
}

void KeyValueConfig::reject_unknown() const {
  for (const auto& [key, value] : values_)
    if (consumed_.count(key) == 0)
      throw ConfigError("config: unknown key '" + key + "'");
}

std::string KeyValueConfig::resolved_text() const {
  std::string out;
  for (const auto& [key, value] : consumed_) out += key + "=" + value + "\n";
  return out;
}

}  // namespace colonpose
