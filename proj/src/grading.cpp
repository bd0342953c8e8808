#include "drillsim/grading.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace drillsim {

GradingScheme parse_grading_scheme(const std::string& name) {
  if (name == "last8") return GradingScheme::Last8;
  if (name == "window") return GradingScheme::WindowNg;
  if (name == "window_tapered") return GradingScheme::WindowNgTapered;
  throw std::invalid_argument("unknown grading scheme \"" + name +
                              "\" (expected last8|window|window_tapered)");
}

std::string grading_scheme_name(GradingScheme s) {
  switch (s) {
    case GradingScheme::Last8: return "last8";
    case GradingScheme::WindowNg: return "window";
    case GradingScheme::WindowNgTapered: return "window_tapered";
  }
  return "?";
}

int window_size(int n) {
  if (n < 0) throw std::invalid_argument("window_size: n must be >= 0");
  return std::max(8, std::min(n / 2, 30));
}

double windowed_grade(const std::vector<int>& answers, int window,
                      const std::vector<double>& weights) {
  if (window < 1) throw std::invalid_argument("windowed_grade: window must be >= 1");
  if (static_cast<int>(weights.size()) != window)
    throw std::invalid_argument("windowed_grade: need one weight per window slot");
  const int n = static_cast<int>(answers.size());
  double num = 0.0, den = 0.0;
  for (int j = 0; j < window; ++j) {  // j = 0 is the newest slot
    den += weights[static_cast<size_t>(j)];
    const int idx = n - 1 - j;
    if (idx < 0) continue;  // below the window: counts as incorrect
    const int a = answers[static_cast<size_t>(idx)];
    if (a != 0 && a != 1)
      throw std::invalid_argument("grade: answers must be 0 or 1, got " + std::to_string(a));
    num += weights[static_cast<size_t>(j)] * a;
  }
  return num / den;
}

double grade(const std::vector<int>& answers, GradingScheme scheme) {
  for (int a : answers)
    if (a != 0 && a != 1)
      throw std::invalid_argument("grade: answers must be 0 or 1, got " + std::to_string(a));
  const int n = static_cast<int>(answers.size());
  switch (scheme) {
    case GradingScheme::Last8:
      return windowed_grade(answers, 8, std::vector<double>(8, 1.0));
    case GradingScheme::WindowNg: {
      const int ng = window_size(n);
      return windowed_grade(answers, ng, std::vector<double>(static_cast<size_t>(ng), 1.0));
    }
    case GradingScheme::WindowNgTapered: {
      const int ng = window_size(n);
      std::vector<double> w(static_cast<size_t>(ng));
      for (int j = 0; j < ng; ++j) w[static_cast<size_t>(j)] = ng - j;  // newest ng .. oldest 1
      return windowed_grade(answers, ng, w);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace drillsim
