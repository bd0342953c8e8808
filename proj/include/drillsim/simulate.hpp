#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drillsim/allocation.hpp"
#include "drillsim/grading.hpp"
#include "drillsim/itembank.hpp"
#include "drillsim/rng.hpp"
#include "drillsim/timeout.hpp"

namespace drillsim {

// Latent description of one student class. Labels follow the quadrant
// scheme: G fast+right, L slow+right, P fast+wrong, U slow+wrong.
struct Archetype {
  char label = 'G';
  double ability_mean = 0.0;  // logit scale
  double ability_sd = 0.35;
  double diligence = 1.0;   // median time multiplier, > 0
  double learn_rate = 0.0;  // ability gain per engaged answer, >= 0

  void validate() const;
};

struct SimStudent {
  std::string student_id;
  char archetype = 'G';
  double ability = 0.0;
  double diligence = 1.0;
  double status_g = 0.0;  // 0-100
  double final_g = 0.0;   // 0-100
  bool stop_sign = false;
  std::optional<TimeoutParams> timeout_params;  // per-student override
};

struct BehaviorModel {
  double guess_floor = 0.25;       // multiple-choice chance level
  double difficulty_scale = 2.0;   // rank -> logit difficulty and time inflation
  double time_median_base = 2.0;   // minutes
  double time_sigma = 0.5;         // lognormal shape
  double target_grade = 0.92;      // students stop drilling at this grade
  int max_attempts = 40;           // per lecture
  double engagement_threshold = 1.2;  // minutes of thought required to learn

  double stop_sign_time_factor = 1.5;  // pop-up slowdown multiplier
  // Answers given right after a deferred one degrade toward guessing by this
  // fraction; 0 disables the channel (the default engine has no timeout
  // irritation, experiments switch it on to create a known positive effect).
  double timeout_frustration = 0.0;

  double exam_scale = 4.0;     // logit-to-exam-score spread
  double exam_noise_sd = 5.0;  // exam points

  bool timeout_enabled = false;
  TimeoutParams timeout{};

  std::map<char, Archetype> archetypes;

  BehaviorModel();
  void validate() const;
};

// Monotone map from latent ability to the 0-100 exam scale; saturates near
// 100 so already-strong students have little headroom.
double exam_score(double ability, const BehaviorModel& model);

// (student, lecture ordinal) -> enforced timeout parameters for that cell.
using TimeoutAssignmentMap = std::map<std::pair<std::string, int>, TimeoutParams>;

struct CourseResult {
  std::vector<AnswerEvent> events;
  std::map<std::string, ExamGrades> exams;
  std::vector<SimStudent> students;  // post-course state (final abilities)
};

// Draws `counts[label]` students per archetype, ids s0001..; status_g comes
// from the initial ability plus exam noise, truncated to [0,100].
std::vector<SimStudent> sample_cohort(const std::map<char, int>& counts,
                                      const BehaviorModel& model, Rng& rng);

// One drilling session: items via the allocation pmf, correctness from a
// guessing-floored logistic in (ability - difficulty), lognormal times,
// timeout deferral and stop-sign inflation when active, ability gains gated
// on the engagement threshold. Mutates student.ability. Stops at the target
// grade or the attempt cap.
std::vector<AnswerEvent> simulate_session(SimStudent& student, int lecture_ordinal,
                                          const ItemBank& bank, GradingScheme scheme,
                                          const AllocationParams& alloc,
                                          const BehaviorModel& model, Rng& rng,
                                          PmfCache* cache = nullptr,
                                          const TimeoutParams* cell_timeout = nullptr);

// Every student through lectures first..last in order (last = 0 means the
// whole bank); per-(student, lecture) streams are derived from the seed, so
// the log is reproducible event for event. `per_cell_timeout`, when given,
// enforces an experiment assignment. Exam grades are re-evaluated from the
// post-run abilities, which makes phased runs (classify window, then
// follow-up window) chainable through `students`.
CourseResult simulate_course(const std::vector<SimStudent>& cohort, const ItemBank& bank,
                             GradingScheme scheme, const AllocationParams& alloc,
                             const BehaviorModel& model, std::uint64_t seed,
                             const TimeoutAssignmentMap* per_cell_timeout = nullptr,
                             int first_lecture = 1, int last_lecture = 0);

}  // namespace drillsim
