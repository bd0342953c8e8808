#pragma once

#include <set>
#include <string>
#include <vector>

#include "drillsim/analytics.hpp"
#include "drillsim/itembank.hpp"
#include "drillsim/rng.hpp"
#include "drillsim/timeout.hpp"

namespace drillsim {

// Randomize one timeout parameter per (student, lecture) cell.
struct TimeoutDesign {
  TimeoutField vary = TimeoutField::B;
  double lo = 1.0;
  double hi = 4.0;
  TimeoutParams base{};

  void validate() const { check_timeout_interval(base, vary, lo, hi); }
};

struct TimeoutAssignmentRow {
  std::string student_id;
  int lecture = 1;
  double value = 0.0;
};

enum class TimeoutOutcome { AttemptsPerLecture, FinalExam };

// One independent uniform draw per (student, lecture); streams are keyed by
// the cell so the table is reproducible byte for byte from the seed.
std::vector<TimeoutAssignmentRow> assign_timeout(const TimeoutDesign& design,
                                                 const std::vector<std::string>& students,
                                                 int lectures, std::uint64_t seed);

std::string serialize_timeout_assignment(const std::vector<TimeoutAssignmentRow>& rows);
std::vector<TimeoutAssignmentRow> load_timeout_assignment(const std::string& text);

// Regresses the chosen outcome on the sampled parameter. Attempts are
// analyzed at cell level; the exam outcome at student level against the
// student's mean sampled value (exam grades supplied separately).
FitResult evaluate_timeout_effect(const std::vector<AnswerEvent>& log,
                                  const std::vector<TimeoutAssignmentRow>& assignment,
                                  TimeoutOutcome outcome,
                                  const std::map<std::string, ExamGrades>* exams = nullptr);

// Uniformly random half (floor) of the P-labeled students.
std::set<std::string> assign_stop_signs(const GlupResult& glup, std::uint64_t seed);

struct StopSignEffect {
  int n_treated = 0;
  int n_control = 0;
  double exit_treated = 0.0;
  double exit_control = 0.0;
  double difference = 0.0;
  double std_error = 0.0;  // pooled
  double z = 0.0;
  double p = 1.0;
};

// Pooled two-proportion z-test on P-exit: among students labeled P in
// `before`, compares how many are no longer P in `after`, treated vs not.
StopSignEffect evaluate_stop_sign_effect(const GlupResult& before, const GlupResult& after,
                                         const std::set<std::string>& treated);

std::string serialize_stop_sign_effect(const StopSignEffect& e);

}  // namespace drillsim
