#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "drillsim/allocation.hpp"
#include "drillsim/config.hpp"
#include "drillsim/grading.hpp"
#include "drillsim/simulate.hpp"

namespace drillsim::cli {

// Config section -> engine parameter translation, shared by the CLI and the
// test harnesses.
AllocationParams alloc_from_config(const Config& cfg);
GradingScheme scheme_from_config(const Config& cfg);
BehaviorModel model_from_config(const Config& cfg);
std::map<char, int> counts_from_config(const Config& cfg);
std::vector<int> lecture_sizes_from_config(const Config& cfg);

// Entry point behind the binary. Returns the process exit code:
// 0 success, 1 validation/data errors, 2 usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace drillsim::cli
