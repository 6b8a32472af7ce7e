#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace attrdisc {

// Flat "[section]" + "key = value" config with a closed key set. Flag
// overrides are merged on top via set().
class PipelineConfig {
 public:
  PipelineConfig();
  static PipelineConfig from_file(const std::string& path);

  // dotted name, e.g. "selection.lambda"; throws config_error on unknown keys
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_seed(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  void validate(const std::string& key, const std::string& value) const;
  std::map<std::string, std::string> values_;
};

}  // namespace attrdisc
