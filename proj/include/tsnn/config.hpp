#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tsnn {

// Flat "key = value" text config with '#' comments and a mandatory
// schema_version key. Unknown keys are preserved (and can be queried), so
// configs are forward-extensible.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key,
                         const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::vector<int> get_int_list(const std::string& key) const;  // "100,100"

  void set(const std::string& key, const std::string& value);
  std::string serialize() const;  // deterministic key order

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace tsnn
