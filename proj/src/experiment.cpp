#include "drillsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "drillsim/csv.hpp"
#include "drillsim/stats.hpp"

namespace drillsim {

std::vector<TimeoutAssignmentRow> assign_timeout(const TimeoutDesign& design,
                                                 const std::vector<std::string>& students,
                                                 int lectures, std::uint64_t seed) {
  design.validate();
  if (lectures < 1) throw std::invalid_argument("assign_timeout: lectures must be >= 1");
  std::vector<TimeoutAssignmentRow> rows;
  rows.reserve(students.size() * static_cast<size_t>(lectures));
  for (const auto& sid : students) {
    for (int lec = 1; lec <= lectures; ++lec) {
      Rng rng = Rng::keyed(seed, sid, static_cast<std::uint64_t>(lec),
                           StreamKind::AssignTimeout);
      rows.push_back(TimeoutAssignmentRow{sid, lec, rng.uniform(design.lo, design.hi)});
    }
  }
  return rows;
}

std::string serialize_timeout_assignment(const std::vector<TimeoutAssignmentRow>& rows) {
  std::string out = "student_id,lecture,value\n";
  for (const auto& r : rows) {
    out += r.student_id;
    out += ',';
    out += std::to_string(r.lecture);
    out += ',';
    out += csv::format_double(r.value);
    out += '\n';
  }
  return out;
}

std::vector<TimeoutAssignmentRow> load_timeout_assignment(const std::string& text) {
  csv::Table t = csv::parse(text, {"student_id", "lecture", "value"});
  std::vector<TimeoutAssignmentRow> rows;
  rows.reserve(t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    auto lec = csv::parse_int(r[1]);
    auto val = csv::parse_double(r[2]);
    if (!lec || !val)
      throw std::runtime_error("line " + std::to_string(i + 2) + ": bad assignment row");
    rows.push_back(TimeoutAssignmentRow{r[0], static_cast<int>(*lec), *val});
  }
  return rows;
}

FitResult evaluate_timeout_effect(const std::vector<AnswerEvent>& log,
                                  const std::vector<TimeoutAssignmentRow>& assignment,
                                  TimeoutOutcome outcome,
                                  const std::map<std::string, ExamGrades>* exams) {
  std::map<std::pair<std::string, std::string>, int> attempts;  // (student, lecture_id)
  for (const auto& e : log) {
    auto& a = attempts[{e.student_id, e.lecture_id}];
    a = std::max(a, e.seq);
  }

  std::map<std::pair<std::string, int>, double> assigned;
  std::map<std::string, std::pair<double, int>> per_student;  // sum, count
  for (const auto& r : assignment) {
    assigned[{r.student_id, r.lecture}] = r.value;
    auto& ps = per_student[r.student_id];
    ps.first += r.value;
    ps.second += 1;
  }

  std::vector<double> xs, ys;
  if (outcome == TimeoutOutcome::AttemptsPerLecture) {
    // assignments are keyed by lecture ordinal while the log carries lecture
    // ids; sessions are logged in course order, so first appearance per
    // student recovers the ordinal
    std::map<std::string, std::map<std::string, int>> ordinal;
    for (const auto& e : log) {
      auto& m = ordinal[e.student_id];
      if (!m.count(e.lecture_id)) {
        const int next = static_cast<int>(m.size()) + 1;
        m[e.lecture_id] = next;
      }
    }
    for (const auto& [key, att] : attempts) {
      const auto& [sid, lid] = key;
      const int lec = ordinal.at(sid).at(lid);
      auto it = assigned.find({sid, lec});
      if (it == assigned.end())
        throw std::invalid_argument("evaluate_timeout_effect: no assignment for (" + sid + ", " +
                                    lid + ")");
      xs.push_back(it->second);
      ys.push_back(att);
    }
  } else {
    if (!exams)
      throw std::invalid_argument("evaluate_timeout_effect: exam outcome needs an exam table");
    std::set<std::string> students;
    for (const auto& e : log) students.insert(e.student_id);
    for (const auto& sid : students) {
      auto pa = per_student.find(sid);
      if (pa == per_student.end())
        throw std::invalid_argument("evaluate_timeout_effect: no assignment for student " + sid);
      auto ex = exams->find(sid);
      if (ex == exams->end())
        throw std::invalid_argument("evaluate_timeout_effect: no exam grades for student " + sid);
      xs.push_back(pa->second.first / pa->second.second);
      ys.push_back(ex->second.final_g);
    }
  }

  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = xs[static_cast<size_t>(i)];
    y[i] = ys[static_cast<size_t>(i)];
  }
  const std::string slope_name =
      outcome == TimeoutOutcome::AttemptsPerLecture ? "value" : "mean_value";
  FitResult fit = ols_fit(X, y, {"(Intercept)", slope_name});
  if (fit.rss <= 1e-10 * (y.squaredNorm() + 1.0) || !std::isfinite(fit.t_values[1]))
    throw std::runtime_error(
        "evaluate_timeout_effect: degenerate regression (zero residual variance), slope standard "
        "error undefined");
  return fit;
}

std::set<std::string> assign_stop_signs(const GlupResult& glup, std::uint64_t seed) {
  std::vector<std::string> eligible;
  for (const auto& [sid, label] : glup.labels)
    if (label == 'P') eligible.push_back(sid);
  if (eligible.size() < 2)
    throw std::invalid_argument("assign_stop_signs: need at least 2 P students, have " +
                                std::to_string(eligible.size()));
  std::sort(eligible.begin(), eligible.end());
  Rng rng = Rng::keyed(seed, "stop-signs", eligible.size(), StreamKind::AssignStopSign);
  // partial Fisher-Yates: the first half after shuffling is the treated set
  const size_t k = eligible.size() / 2;
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  return std::set<std::string>(eligible.begin(), eligible.begin() + static_cast<long>(k));
}

StopSignEffect evaluate_stop_sign_effect(const GlupResult& before, const GlupResult& after,
                                         const std::set<std::string>& treated) {
  auto after_labels = after.label_map();
  int nt = 0, nc = 0, xt = 0, xc = 0;
  for (const auto& [sid, label] : before.labels) {
    if (label != 'P') continue;
    auto it = after_labels.find(sid);
    if (it == after_labels.end())
      throw std::invalid_argument("evaluate_stop_sign_effect: student " + sid +
                                  " missing from the follow-up classification");
    const bool exited = it->second != 'P';
    if (treated.count(sid)) {
      ++nt;
      xt += exited;
    } else {
      ++nc;
      xc += exited;
    }
  }
  if (nt == 0 || nc == 0)
    throw std::invalid_argument("evaluate_stop_sign_effect: empty treated or control arm");

  StopSignEffect e;
  e.n_treated = nt;
  e.n_control = nc;
  e.exit_treated = static_cast<double>(xt) / nt;
  e.exit_control = static_cast<double>(xc) / nc;
  e.difference = e.exit_treated - e.exit_control;
  const double pooled = static_cast<double>(xt + xc) / (nt + nc);
  e.std_error = std::sqrt(pooled * (1.0 - pooled) * (1.0 / nt + 1.0 / nc));
  e.z = e.std_error > 0.0 ? e.difference / e.std_error : 0.0;
  e.p = 2.0 * (1.0 - normal_cdf(std::fabs(e.z)));
  return e;
}

std::string serialize_stop_sign_effect(const StopSignEffect& e) {
  std::string out =
      "n_treated,n_control,exit_treated,exit_control,difference,std_error,z,p\n";
  out += std::to_string(e.n_treated);
  out += ',';
  out += std::to_string(e.n_control);
  out += ',';
  out += csv::format_double(e.exit_treated);
  out += ',';
  out += csv::format_double(e.exit_control);
  out += ',';
  out += csv::format_double(e.difference);
  out += ',';
  out += csv::format_double(e.std_error);
  out += ',';
  out += csv::format_double(e.z);
  out += ',';
  out += csv::format_double(e.p);
  out += '\n';
  return out;
}

}  // namespace drillsim
