#pragma once

#include <map>
#include <string>
#include <vector>

namespace drillsim {

// Flat "key = value" config file. Keys are checked against the registry of
// known keys: a typo is an error, not a silently ignored setting.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::string get_string(const std::string& key, const std::string& def) const;

  void set(const std::string& key, const std::string& value);

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace drillsim
