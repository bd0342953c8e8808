#include "drillsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drillsim {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double clamp01_100(double v) { return std::min(100.0, std::max(0.0, v)); }

}  // namespace

void Archetype::validate() const {
  if (!(diligence > 0)) throw std::invalid_argument("archetype: diligence must be > 0");
  if (!(learn_rate >= 0)) throw std::invalid_argument("archetype: learn_rate must be >= 0");
  if (!(ability_sd >= 0)) throw std::invalid_argument("archetype: ability_sd must be >= 0");
}

BehaviorModel::BehaviorModel() {
  // Calibrated so that median per-lecture attempts lands in the mid-teens,
  // final-window grades sit around 0.9+, and the four classes separate on
  // first-item grade/time medians. Learners gain the most over a course,
  // guessers the least: learning only happens on engaged (slow enough)
  // answers, and the guessing archetype rarely crosses that threshold.
  archetypes['G'] = Archetype{'G', 1.6, 0.35, 0.9, 0.004};
  archetypes['L'] = Archetype{'L', 1.2, 0.35, 1.6, 0.016};
  archetypes['P'] = Archetype{'P', -0.9, 0.35, 0.45, 0.0007};
  archetypes['U'] = Archetype{'U', -0.7, 0.35, 1.4, 0.0035};
}

void BehaviorModel::validate() const {
  if (!(guess_floor >= 0 && guess_floor < 1))
    throw std::invalid_argument("behavior: guess_floor must be in [0,1)");
  if (!(time_median_base > 0))
    throw std::invalid_argument("behavior: time_median_base must be > 0");
  if (!(target_grade > 0 && target_grade <= 1))
    throw std::invalid_argument("behavior: target_grade must be in (0,1]");
  if (max_attempts < 1) throw std::invalid_argument("behavior: max_attempts must be >= 1");
  if (!(stop_sign_time_factor > 0))
    throw std::invalid_argument("behavior: stop_sign_time_factor must be > 0");
  if (!(timeout_frustration >= 0 && timeout_frustration <= 1))
    throw std::invalid_argument("behavior: timeout_frustration must be in [0,1]");
  if (timeout_enabled) timeout.validate();
  for (const auto& [label, a] : archetypes) a.validate();
}

double exam_score(double ability, const BehaviorModel& model) {
  return 100.0 * logistic(ability / model.exam_scale);
}

std::vector<SimStudent> sample_cohort(const std::map<char, int>& counts,
                                      const BehaviorModel& model, Rng& rng) {
  model.validate();
  int total = 0;
  for (const auto& [label, c] : counts) {
    if (c < 0) throw std::invalid_argument("sample_cohort: counts must be >= 0");
    total += c;
  }
  if (total == 0) throw std::invalid_argument("sample_cohort: all counts are zero");

  std::vector<SimStudent> cohort;
  cohort.reserve(static_cast<size_t>(total));
  int next_id = 1;
  for (char label : {'G', 'L', 'P', 'U'}) {
    auto it = counts.find(label);
    const int c = it == counts.end() ? 0 : it->second;
    if (c == 0) continue;
    const Archetype& arch = model.archetypes.at(label);
    for (int i = 0; i < c; ++i) {
      SimStudent s;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "s%04d", next_id++);
      s.student_id = buf;
      s.archetype = label;
      s.ability = rng.normal(arch.ability_mean, arch.ability_sd);
      s.diligence = arch.diligence * std::exp(0.15 * rng.normal());
      s.status_g = clamp01_100(exam_score(s.ability, model) + rng.normal(0, model.exam_noise_sd));
      cohort.push_back(std::move(s));
    }
  }
  return cohort;
}

std::vector<AnswerEvent> simulate_session(SimStudent& student, int lecture_ordinal,
                                          const ItemBank& bank, GradingScheme scheme,
                                          const AllocationParams& alloc,
                                          const BehaviorModel& model, Rng& rng, PmfCache* cache,
                                          const TimeoutParams* cell_timeout) {
  model.validate();
  const Lecture& lec = bank.lecture(lecture_ordinal);
  const Archetype& arch = model.archetypes.at(student.archetype);

  const TimeoutParams* tp = nullptr;
  if (cell_timeout) {
    tp = cell_timeout;
  } else if (student.timeout_params) {
    tp = &*student.timeout_params;
  } else if (model.timeout_enabled) {
    tp = &model.timeout;
  }

  std::vector<AnswerEvent> events;
  std::vector<int> history;
  double g = 0.0;
  bool prev_deferred = false;
  for (int attempt = 1; attempt <= model.max_attempts; ++attempt) {
    const ItemChoice choice = next_item(g, lecture_ordinal, bank, alloc, rng, cache);
    const double rf = (choice.rank - 0.5) / choice.lecture_items;
    const double difficulty = model.difficulty_scale * (rf - 0.5);

    double p_correct =
        model.guess_floor + (1.0 - model.guess_floor) * logistic(student.ability - difficulty);
    if (prev_deferred && model.timeout_frustration > 0.0)
      p_correct = model.guess_floor + (1.0 - model.timeout_frustration) *
                                          (p_correct - model.guess_floor);
    const int correct = rng.bernoulli(p_correct) ? 1 : 0;

    const double median = model.time_median_base * student.diligence *
                          (1.0 + model.difficulty_scale * rf);
    double time = rng.lognormal_median(median, model.time_sigma);
    if (student.stop_sign) time *= model.stop_sign_time_factor;

    bool deferred = false;
    if (tp) {
      const double t_min = timeout_curve(10.0 * g, *tp);  // internal grade is 0-1
      if (time < t_min) {
        time = t_min;
        deferred = true;
      }
    }
    prev_deferred = deferred;

    if (time > model.engagement_threshold) student.ability += arch.learn_rate;

    history.push_back(correct);
    g = grade(history, scheme);

    AnswerEvent e;
    e.student_id = student.student_id;
    e.lecture_id = lec.lecture_id;
    e.item_id = choice.item_id;
    e.seq = attempt;
    e.time_min = time;
    e.correct = correct;
    e.grade_after = g;
    events.push_back(std::move(e));

    if (g >= model.target_grade) break;
  }
  return events;
}

CourseResult simulate_course(const std::vector<SimStudent>& cohort, const ItemBank& bank,
                             GradingScheme scheme, const AllocationParams& alloc,
                             const BehaviorModel& model, std::uint64_t seed,
                             const TimeoutAssignmentMap* per_cell_timeout, int first_lecture,
                             int last_lecture) {
  if (cohort.empty()) throw std::invalid_argument("simulate_course: empty cohort");
  if (bank.lecture_count() == 0) throw std::invalid_argument("simulate_course: empty bank");
  if (last_lecture == 0) last_lecture = bank.lecture_count();
  if (first_lecture < 1 || last_lecture > bank.lecture_count() || first_lecture > last_lecture)
    throw std::invalid_argument("simulate_course: bad lecture range");

  CourseResult result;
  result.students = cohort;
  PmfCache cache(alloc);
  for (auto& student : result.students) {
    for (int lec = first_lecture; lec <= last_lecture; ++lec) {
      Rng rng = Rng::keyed(seed, student.student_id, static_cast<std::uint64_t>(lec),
                           StreamKind::Session);
      const TimeoutParams* cell = nullptr;
      if (per_cell_timeout) {
        auto it = per_cell_timeout->find({student.student_id, lec});
        if (it != per_cell_timeout->end()) cell = &it->second;
      }
      auto events = simulate_session(student, lec, bank, scheme, alloc, model, rng, &cache, cell);
      result.events.insert(result.events.end(), events.begin(), events.end());
    }
    Rng exam_rng = Rng::keyed(seed, student.student_id, 0, StreamKind::Exam);
    student.final_g =
        clamp01_100(exam_score(student.ability, model) + exam_rng.normal(0, model.exam_noise_sd));
    result.exams[student.student_id] = ExamGrades{student.status_g, student.final_g};
  }
  return result;
}

}  // namespace drillsim
