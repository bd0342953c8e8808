#include "drillsim/config.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "drillsim/csv.hpp"

namespace drillsim {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      // allocation
      "allocation.k",
      "allocation.p_hist",
      // grading
      "grading.scheme",
      // timeout
      "timeout.a",
      "timeout.b",
      "timeout.g_star",
      "timeout.s",
      "timeout.enabled",
      // simulation: course shape
      "sim.lectures",
      "sim.items_per_lecture",
      "sim.count_G",
      "sim.count_L",
      "sim.count_P",
      "sim.count_U",
      // simulation: behavior model
      "sim.guess_floor",
      "sim.difficulty_scale",
      "sim.time_median_base",
      "sim.time_sigma",
      "sim.target_grade",
      "sim.max_attempts",
      "sim.engagement_threshold",
      "sim.stop_sign_time_factor",
      "sim.timeout_frustration",
      "sim.exam_scale",
      "sim.exam_noise_sd",
      // simulation: archetypes
      "sim.ability_mean_G",
      "sim.ability_mean_L",
      "sim.ability_mean_P",
      "sim.ability_mean_U",
      "sim.ability_sd_G",
      "sim.ability_sd_L",
      "sim.ability_sd_P",
      "sim.ability_sd_U",
      "sim.diligence_G",
      "sim.diligence_L",
      "sim.diligence_P",
      "sim.diligence_U",
      "sim.learn_rate_G",
      "sim.learn_rate_L",
      "sim.learn_rate_P",
      "sim.learn_rate_U",
      // experiment
      "experiment.design",
      "experiment.lo",
      "experiment.hi",
      "experiment.outcome",
      "experiment.classify_lectures",
      "experiment.followup_lectures",
  };
  return keys;
}

Config Config::from_file(const std::string& path) {
  return from_string(csv::read_file(path), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": expected \"key = value\"";
      throw std::runtime_error(msg.str());
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    const auto& known = known_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": unknown config key \"" << key << "\"";
      throw std::runtime_error(msg.str());
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

double Config::get_double(const std::string& key, double def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  auto v = csv::parse_double(it->second);
  if (!v) throw std::runtime_error("config key " + key + ": not a number: " + it->second);
  return *v;
}

int Config::get_int(const std::string& key, int def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  auto v = csv::parse_int(it->second);
  if (!v) throw std::runtime_error("config key " + key + ": not an integer: " + it->second);
  return static_cast<int>(*v);
}

bool Config::get_bool(const std::string& key, bool def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw std::runtime_error("config key " + key + ": not a bool: " + it->second);
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
  auto it = values_.find(key);
  return it == values_.end() ? def : it->second;
}

}  // namespace drillsim
