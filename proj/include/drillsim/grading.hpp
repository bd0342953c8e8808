#pragma once

#include <string>
#include <vector>

namespace drillsim {

// Rolling-grade schemes over a student's 0/1 answer history within a lecture.
// All of them assume incorrect answers below the window: a short history is
// zero-padded, so the grade starts at 0 and has to be earned.
enum class GradingScheme {
  Last8,            // fixed window of 8, the historical rule
  WindowNg,         // window of max(8, min(n/2, 30)) most recent answers
  WindowNgTapered,  // same window, linearly down-weighting older answers
};

GradingScheme parse_grading_scheme(const std::string& name);
std::string grading_scheme_name(GradingScheme s);

// max(8, min(floor(n/2), 30)) for n total answers given.
int window_size(int n);

// Weighted mean over the last `window` answers, zero-padded when the history
// is shorter. weights[0] applies to the newest answer. Weights must be
// positive; they are normalized by their sum.
double windowed_grade(const std::vector<int>& answers, int window,
                      const std::vector<double>& weights);

// Grade in [0,1] for the history under the scheme. Throws on non-binary entries.
double grade(const std::vector<int>& answers, GradingScheme scheme);

}  // namespace drillsim
