#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colonpose/common.hpp"

namespace colonpose {

// Plain-text key=value configuration. '#' starts a comment. Every key read
// through a getter is marked consumed; reject_unknown() names the first key
// nobody asked for, so typos fail loudly.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  // "key=value" form, as passed on the command line
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

  void reject_unknown() const;

  // consumed keys with their effective values, sorted; for run manifests
  std::string resolved_text() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> consumed_;
};

}  // namespace colonpose
