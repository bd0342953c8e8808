// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// pass. Run with --cli <path-to-drillsim-binary> so the determinism checks
// can drive the real executable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "drillsim/analytics.hpp"
#include "drillsim/csv.hpp"
#include "drillsim/experiment.hpp"
#include "drillsim/grading.hpp"
#include "drillsim/simulate.hpp"
#include "drillsim/stats.hpp"
#include "drillsim/timeout.hpp"

namespace fs = std::filesystem;
using namespace drillsim;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& info) {
    if (!detail.empty()) detail += "; ";
    detail += info;
  }
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Independent least-squares route: Gauss-Jordan on the normal equations,
// no shared code with the Eigen-backed implementation.
std::vector<double> normal_equations_oracle(const std::vector<std::vector<double>>& X,
                                            const std::vector<double>& y) {
  const size_t n = X.size();
  const size_t p = X[0].size();
  std::vector<std::vector<double>> A(p, std::vector<double>(p + 1, 0.0));
  for (size_t j = 0; j < p; ++j) {
    for (size_t k = 0; k < p; ++k)
      for (size_t i = 0; i < n; ++i) A[j][k] += X[i][j] * X[i][k];
    for (size_t i = 0; i < n; ++i) A[j][p] += X[i][j] * y[i];
  }
  for (size_t col = 0; col < p; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < p; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[pivot][col])) pivot = r;
    std::swap(A[col], A[pivot]);
    const double d = A[col][col];
    for (size_t k = col; k <= p; ++k) A[col][k] /= d;
    for (size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = A[r][col];
      for (size_t k = col; k <= p; ++k) A[r][k] -= f * A[col][k];
    }
  }
  std::vector<double> beta(p);
  for (size_t j = 0; j < p; ++j) beta[j] = A[j][p];
  return beta;
}

// ---------------------------------------------------------------------------
// criterion 1: OLS vs independent oracle on 100 seeded problems

Check criterion_ols_oracle() {
  Check c;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(10'000 + static_cast<std::uint64_t>(trial));
    const int n = 20 + static_cast<int>(rng.below(181));  // <= 200
    const int p = 2 + static_cast<int>(rng.below(7));     // <= 8
    std::vector<std::vector<double>> Xv(static_cast<size_t>(n),
                                        std::vector<double>(static_cast<size_t>(p)));
    std::vector<double> yv(static_cast<size_t>(n));
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      Xv[static_cast<size_t>(i)][0] = 1.0;
      X(i, 0) = 1.0;
      for (int j = 1; j < p; ++j) {
        const double v = rng.normal();
        Xv[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
        X(i, j) = v;
      }
      yv[static_cast<size_t>(i)] = rng.normal(0.0, 3.0);
      y(i) = yv[static_cast<size_t>(i)];
    }
    std::vector<std::string> names{"(Intercept)"};
    for (int j = 1; j < p; ++j) names.push_back("x" + std::to_string(j));
    auto fit = ols_fit(X, y, names);
    auto oracle = normal_equations_oracle(Xv, yv);
    for (int j = 0; j < p; ++j)
      worst = std::max(worst,
                       std::fabs(fit.estimates[static_cast<size_t>(j)] -
                                 oracle[static_cast<size_t>(j)]));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max |diff| = %.2e", worst);
  c.note(buf);
  if (worst > 1e-8) c.fail("exceeds 1e-8");
  return c;
}

// ---------------------------------------------------------------------------
// criterion 2: treatment-coded ANOVA identity and fixed reference group means

Check criterion_anova_identity() {
  Check c;
  // identity on random group data, exact to 1e-10
  Rng rng(777);
  const char* levels[4] = {"P", "G", "L", "U"};
  for (int trial = 0; trial < 3; ++trial) {
    DataTable t;
    std::vector<double> y;
    std::vector<std::string> cls;
    double sums[4] = {0, 0, 0, 0};
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < 80; ++i) {
      const int g = static_cast<int>(rng.below(4));
      const double v = rng.normal(5.0 * g, 3.0);
      y.push_back(v);
      cls.push_back(levels[g]);
      sums[g] += v;
      ++counts[g];
    }
    t.add_numeric("y", y);
    t.add_categorical("class", cls);
    auto fit = fit_model(t, {"class"}, "y");
    const double base = sums[0] / counts[0];
    const double expected[4] = {base, sums[1] / counts[1] - base, sums[2] / counts[2] - base,
                                sums[3] / counts[3] - base};
    for (int j = 0; j < 4; ++j)
      if (std::fabs(fit.estimates[static_cast<size_t>(j)] - expected[j]) > 1e-10)
        c.fail("identity off at coefficient " + fit.terms[static_cast<size_t>(j)]);
  }

  // synthetic data with fixed reference group means
  const double means[4] = {9.5582, 16.5253, 21.0354, 18.5691};  // P, G, L, U
  DataTable t;
  std::vector<double> y;
  std::vector<std::string> cls;
  for (int g = 0; g < 4; ++g)
    for (double d : {-1.0, 1.0}) {
      y.push_back(means[g] + d);
      cls.push_back(levels[g]);
    }
  t.add_numeric("improvement", y);
  t.add_categorical("class", cls);
  auto fit = fit_model(t, {"class"}, "improvement");
  const double expected[4] = {9.5582, 6.9671, 11.4772, 9.0109};
  double worst = 0.0;
  for (int j = 0; j < 4; ++j)
    worst = std::max(worst, std::fabs(fit.estimates[static_cast<size_t>(j)] - expected[j]));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "group-mean coefficients off by %.2e", worst);
  c.note(buf);
  if (worst > 1e-4) c.fail("exceeds 1e-4");
  return c;
}

// ---------------------------------------------------------------------------
// criterion 3: quadratic vertices

Check criterion_vertices() {
  Check c;
  const double v1 = quadratic_vertex(2.4488, -0.0462);
  const double v2 = quadratic_vertex(6.0022, -1.0496);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "v1 = %.4f, v2 = %.4f", v1, v2);
  c.note(buf);
  if (std::fabs(v1 - 26.50) > 0.01) c.fail("first vertex outside 26.50 +/- 0.01");
  if (std::fabs(v2 - 2.86) > 0.01) c.fail("second vertex outside 2.86 +/- 0.01");
  return c;
}

// ---------------------------------------------------------------------------
// criterion 4: timeout curve

Check criterion_timeout() {
  Check c;
  TimeoutParams p;  // (10, 2, 5, 1)
  if (timeout_curve(5.0, p) != 2.0) c.fail("t(5) != 2 exactly");
  for (double d = 0.0; d <= 5.0; d += 0.001)
    if (std::fabs(timeout_curve(5.0 + d, p) - timeout_curve(5.0 - d, p)) > 1e-12) {
      c.fail("asymmetric at d = " + std::to_string(d));
      break;
    }
  for (double g = 0.0; g <= 10.0; g += 0.005) {
    const double t = timeout_curve(g, p);
    if (t < p.b || t > p.a) {
      c.fail("range violated at g = " + std::to_string(g));
      break;
    }
  }
  if (std::fabs(timeout_curve(11.0, p) - p.a) > 1e-6) c.fail("not within 1e-6 of a at g* + 6");
  if (std::fabs(timeout_curve(-1.0, p) - p.a) > 1e-6) c.fail("not within 1e-6 of a at g* - 6");
  return c;
}

// ---------------------------------------------------------------------------
// criterion 5: grading clamps and the eighth-answer trap

Check criterion_grading() {
  Check c;
  if (window_size(8) != 8) c.fail("window_size(8)");
  if (window_size(17) != 8) c.fail("window_size(17)");
  if (window_size(40) != 20) c.fail("window_size(40)");
  if (window_size(100) != 30) c.fail("window_size(100)");
  if (grade({1, 1, 1}, GradingScheme::Last8) != 0.375) c.fail("zero padding");

  std::vector<int> h{1, 1, 1, 1, 1, 1, 1, 0};
  if (grade(h, GradingScheme::Last8) != 0.875) c.fail("trap setup not 0.875");
  h.push_back(1);
  if (grade(h, GradingScheme::Last8) != 0.875) c.fail("trap not replayed: 8th answer forgiven");
  for (int i = 0; i < 6; ++i) {
    h.push_back(1);
    if (grade(h, GradingScheme::Last8) >= 1.0) c.fail("grade reached 1 before 8 straight");
  }
  h.push_back(1);
  if (grade(h, GradingScheme::Last8) != 1.0) c.fail("8 straight correct should give 1");
  return c;
}

// ---------------------------------------------------------------------------
// criterion 6: allocation pmf normalization, dominance, uniform case

Check criterion_pmf() {
  Check c;
  AllocationParams params;  // k = 4
  const int ms[] = {1, 2, 5, 10, 50};
  for (int m : ms) {
    std::vector<std::vector<double>> cdfs;
    for (int gi = 0; gi <= 20; ++gi) {
      auto d = iaa_pmf(gi * 0.05, m, params);
      const double sum = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
      if (std::fabs(sum - 1.0) > 1e-12)
        c.fail("sum off at m=" + std::to_string(m) + " g=" + std::to_string(gi * 0.05));
      cdfs.push_back(d.cdf());
    }
    for (size_t a = 0; a < cdfs.size(); ++a)
      for (size_t b = a + 1; b < cdfs.size(); ++b)
        for (int r = 0; r < m; ++r)
          if (cdfs[b][static_cast<size_t>(r)] > cdfs[a][static_cast<size_t>(r)] + 1e-12)
            c.fail("dominance violated at m=" + std::to_string(m));
    AllocationParams uniform;
    uniform.k = 0.0;
    auto d = iaa_pmf(0.37, m, uniform);
    for (double pr : d.probabilities)
      if (pr != 1.0 / m) c.fail("k=0 not exactly uniform at m=" + std::to_string(m));
  }
  return c;
}

// ---------------------------------------------------------------------------
// criterion 7: qualitative reproduction on the default cohort

Check criterion_simulation() {
  Check c;
  BehaviorModel model;
  AllocationParams alloc;
  const std::uint64_t seed = 42;
  auto bank = build_item_bank(std::vector<int>(34, 10));
  Rng crng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
  auto cohort =
      sample_cohort({{'G', 250}, {'L', 250}, {'P', 250}, {'U', 250}}, model, crng);
  auto result = simulate_course(cohort, bank, GradingScheme::Last8, alloc, model, seed);
  auto aggs = student_aggregates(result.events, result.exams);
  auto glup = glup_classify(aggs);
  auto labels = glup.label_map();

  std::map<char, std::pair<double, int>> improvement;
  for (const auto& a : aggs) {
    auto& slot = improvement[labels.at(a.student_id)];
    slot.first += a.final_g - a.status_g;
    slot.second += 1;
  }
  std::map<char, double> mean;
  for (auto& [label, slot] : improvement) {
    if (slot.second == 0) {
      c.fail(std::string("empty class ") + label);
      return c;
    }
    mean[label] = slot.first / slot.second;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "improvement G=%.1f L=%.1f P=%.1f U=%.1f", mean['G'],
                mean['L'], mean['P'], mean['U']);
  c.note(buf);
  if (!(mean['L'] > mean['G'] && mean['L'] > mean['P'] && mean['L'] > mean['U']))
    c.fail("L is not the highest");
  if (!(mean['P'] < mean['G'] && mean['P'] < mean['L'] && mean['P'] < mean['U']))
    c.fail("P is not the lowest");

  auto fit = anova_improvement(aggs, glup);
  const int iL = fit.find_term("classL");
  std::snprintf(buf, sizeof(buf), "classL p = %.1e", fit.p_values[static_cast<size_t>(iL)]);
  c.note(buf);
  if (!(fit.estimates[static_cast<size_t>(iL)] > 0 &&
        fit.p_values[static_cast<size_t>(iL)] < 0.01))
    c.fail("L - P not significant at 0.01");

  std::map<std::pair<std::string, std::string>, int> cells;
  for (const auto& e : result.events) {
    auto& att = cells[{e.student_id, e.lecture_id}];
    att = std::max(att, e.seq);
  }
  std::vector<double> attempts;
  attempts.reserve(cells.size());
  for (const auto& [key, att] : cells) attempts.push_back(att);
  const double med = median_of(std::move(attempts));
  std::snprintf(buf, sizeof(buf), "median attempts/lecture = %.1f", med);
  c.note(buf);
  if (med < 10.0 || med > 20.0) c.fail("median attempts outside [10, 20]");
  return c;
}

// ---------------------------------------------------------------------------
// criterion 8: stepwise AIC recovery and the never-worse-than-full property

Check criterion_stepwise() {
  Check c;
  int recovered = 0, exact = 0;
  for (int seedi = 0; seedi < 100; ++seedi) {
    Rng rng(40'000 + static_cast<std::uint64_t>(seedi));
    DataTable t;
    std::vector<std::vector<double>> xs(5);
    std::vector<double> y;
    for (int i = 0; i < 500; ++i) {
      for (auto& col : xs) col.push_back(rng.normal());
      y.push_back(1.0 + 2.0 * xs[0].back() + rng.normal());  // sigma = 1, effects >= 0.5
    }
    for (int j = 0; j < 5; ++j) t.add_numeric("x" + std::to_string(j + 1), xs[static_cast<size_t>(j)]);
    t.add_numeric("y", y);
    const std::vector<std::string> full{"x1", "x2", "x3", "x4", "x5"};
    auto full_fit = fit_model(t, full, "y");
    auto res = step_aic(full, t, "y");
    if (res.fit.aic > full_fit.aic + 1e-9) c.fail("selected AIC above the full model");
    const bool has_x1 = std::find(res.terms.begin(), res.terms.end(), "x1") != res.terms.end();
    if (has_x1) ++recovered;  // true model {intercept, x1} retained
    if (res.terms == std::vector<std::string>{"x1"}) ++exact;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "true terms retained %d/100 (noise-free selection %d/100)",
                recovered, exact);
  c.note(buf);
  if (recovered < 90) c.fail("recovery below 90/100");
  return c;
}

// ---------------------------------------------------------------------------
// criterion 9: experiment evaluator calibration

Check criterion_experiments() {
  Check c;
  char buf[96];

  // timeout evaluator, null: assignment applied, no behavioral channel
  {
    int rejections = 0;
    for (int rep = 0; rep < 1000; ++rep) {
      const std::uint64_t seed = 2'000 + static_cast<std::uint64_t>(rep);
      BehaviorModel m;
      for (auto& [label, arch] : m.archetypes) arch.learn_rate = 0.0;
      auto bank = build_item_bank(std::vector<int>(4, 10));
      Rng crng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
      auto cohort = sample_cohort({{'G', 25}, {'L', 25}}, m, crng);
      std::vector<std::string> ids;
      for (const auto& s : cohort) ids.push_back(s.student_id);
      TimeoutDesign design;
      design.lo = 1.0;
      design.hi = 4.0;
      design.base = TimeoutParams{10.0, 2.0, 5.0, 100.0};  // flat curve: floor == b
      auto assignment = assign_timeout(design, ids, 4, seed);
      TimeoutAssignmentMap cells;
      for (const auto& r : assignment) {
        auto tp = design.base;
        tp.b = r.value;
        cells[{r.student_id, r.lecture}] = tp;
      }
      AllocationParams alloc;
      auto res = simulate_course(cohort, bank, GradingScheme::Last8, alloc, m, seed, &cells);
      auto fit =
          evaluate_timeout_effect(res.events, assignment, TimeoutOutcome::AttemptsPerLecture);
      if (fit.p_values[1] < 0.05) ++rejections;
    }
    std::snprintf(buf, sizeof(buf), "timeout null %d/1000", rejections);
    c.note(buf);
    if (rejections < 30 || rejections > 70) c.fail("timeout type-I outside 0.05 +/- 0.02");
  }

  // timeout evaluator, power: frustration channel makes attempts rise with b
  {
    int rejections = 0, positive = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const std::uint64_t seed = 5'000 + static_cast<std::uint64_t>(rep);
      BehaviorModel m;
      for (auto& [label, arch] : m.archetypes) arch.learn_rate = 0.0;
      m.timeout_frustration = 0.35;
      auto bank = build_item_bank(std::vector<int>(2, 10));
      Rng crng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
      auto cohort = sample_cohort({{'G', 250}, {'L', 250}}, m, crng);  // 500 students
      std::vector<std::string> ids;
      for (const auto& s : cohort) ids.push_back(s.student_id);
      TimeoutDesign design;
      design.lo = 1.0;
      design.hi = 4.0;
      design.base = TimeoutParams{10.0, 2.0, 5.0, 100.0};
      auto assignment = assign_timeout(design, ids, 2, seed);
      TimeoutAssignmentMap cells;
      for (const auto& r : assignment) {
        auto tp = design.base;
        tp.b = r.value;
        cells[{r.student_id, r.lecture}] = tp;
      }
      AllocationParams alloc;
      auto res = simulate_course(cohort, bank, GradingScheme::Last8, alloc, m, seed, &cells);
      auto fit =
          evaluate_timeout_effect(res.events, assignment, TimeoutOutcome::AttemptsPerLecture);
      if (fit.p_values[1] < 0.05) ++rejections;
      if (fit.estimates[1] > 0.0) ++positive;
    }
    std::snprintf(buf, sizeof(buf), "timeout power %d/100 (positive slope %d/100)", rejections,
                  positive);
    c.note(buf);
    if (rejections < 90) c.fail("timeout power below 0.9");
    if (positive < 90) c.fail("slope not positive");
  }

  // stop-sign evaluator, null: inert treatment
  {
    int rejections = 0;
    for (int rep = 0; rep < 1000; ++rep) {
      const std::uint64_t seed = 31'000 + static_cast<std::uint64_t>(rep);
      BehaviorModel m;
      m.stop_sign_time_factor = 1.0;  // pop-up does nothing
      m.max_attempts = 25;
      auto bank = build_item_bank(std::vector<int>(4, 10));
      Rng crng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
      auto cohort =
          sample_cohort({{'G', 100}, {'L', 100}, {'P', 100}, {'U', 100}}, m, crng);
      AllocationParams alloc;
      auto pa = simulate_course(cohort, bank, GradingScheme::Last8, alloc, m, seed, nullptr, 1, 2);
      auto before = glup_classify(student_aggregates(pa.events, pa.exams));
      auto treated = assign_stop_signs(before, seed);
      auto fu = pa.students;
      for (auto& s : fu) s.stop_sign = treated.count(s.student_id) > 0;
      auto pb = simulate_course(fu, bank, GradingScheme::Last8, alloc, m, seed, nullptr, 3, 4);
      auto after = classify_with_medians(student_aggregates(pb.events, pb.exams),
                                         before.median_grade, before.median_time);
      auto eff = evaluate_stop_sign_effect(before, after, treated);
      if (eff.p < 0.05) ++rejections;
    }
    std::snprintf(buf, sizeof(buf), "stop-sign null %d/1000", rejections);
    c.note(buf);
    if (rejections < 30 || rejections > 70) c.fail("stop-sign type-I outside 0.05 +/- 0.02");
  }

  // stop-sign evaluator, power: slow-down plus learning boost moves P out
  {
    int rejections = 0, direction = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const std::uint64_t seed = 15'000 + static_cast<std::uint64_t>(rep);
      BehaviorModel m;
      m.stop_sign_time_factor = 4.0;
      m.max_attempts = 25;
      m.archetypes.at('P').learn_rate = 0.02;  // engaged guessers start learning
      auto bank = build_item_bank(std::vector<int>(4, 10));
      Rng crng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
      auto cohort =
          sample_cohort({{'G', 200}, {'L', 200}, {'P', 200}, {'U', 200}}, m, crng);
      AllocationParams alloc;
      auto pa = simulate_course(cohort, bank, GradingScheme::Last8, alloc, m, seed, nullptr, 1, 2);
      auto before = glup_classify(student_aggregates(pa.events, pa.exams));
      auto treated = assign_stop_signs(before, seed);
      auto fu = pa.students;
      for (auto& s : fu) s.stop_sign = treated.count(s.student_id) > 0;
      auto pb = simulate_course(fu, bank, GradingScheme::Last8, alloc, m, seed, nullptr, 3, 4);
      auto after = classify_with_medians(student_aggregates(pb.events, pb.exams),
                                         before.median_grade, before.median_time);
      auto eff = evaluate_stop_sign_effect(before, after, treated);
      if (eff.p < 0.05) ++rejections;
      if (eff.exit_treated > eff.exit_control) ++direction;
    }
    std::snprintf(buf, sizeof(buf), "stop-sign power %d/100 (direction %d/100)", rejections,
                  direction);
    c.note(buf);
    if (rejections < 90) c.fail("stop-sign power below 0.9");
    if (direction < 90) c.fail("treated exit not above control");
  }
  return c;
}

// ---------------------------------------------------------------------------
// criterion 10: CLI byte determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Check criterion_cli_determinism(const std::string& cli) {
  Check c;
  if (cli.empty()) {
    c.fail("no --cli path given");
    return c;
  }
  const fs::path root = fs::temp_directory_path() / "drillsim_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  const fs::path cfg = root / "small.cfg";
  {
    std::ofstream out(cfg);
    out << "sim.count_G = 10\nsim.count_L = 10\nsim.count_P = 10\nsim.count_U = 10\n"
        << "sim.lectures = 4\n";
  }
  const fs::path ecfg_b = root / "exp_b.cfg";
  {
    std::ofstream out(ecfg_b);
    out << "sim.count_G = 10\nsim.count_L = 10\nsim.count_P = 10\nsim.count_U = 10\n"
        << "sim.lectures = 3\nexperiment.design = timeout_b\n";
  }
  const fs::path ecfg_s = root / "exp_s.cfg";
  {
    std::ofstream out(ecfg_s);
    out << "sim.count_G = 10\nsim.count_L = 10\nsim.count_P = 10\nsim.count_U = 10\n"
        << "experiment.design = stop_sign\nexperiment.classify_lectures = 2\n"
        << "experiment.followup_lectures = 2\n";
  }

  auto shell = [&](const std::string& args, const fs::path& stdout_file) {
    const std::string cmd = cli + " " + args + " > " + stdout_file.string() + " 2>&1";
    return std::system(cmd.c_str());
  };

  // two independent passes of the whole pipeline
  for (int pass = 1; pass <= 2; ++pass) {
    const fs::path dir = root / ("pass" + std::to_string(pass));
    fs::create_directories(dir);
    const std::string d = dir.string();
    int rc = 0;
    rc |= shell("simulate --config " + cfg.string() + " --seed 7 --out " + d + "/sim",
                dir / "simulate.out");
    rc |= shell("aggregate --in " + d + "/sim/answers.csv --exams " + d + "/sim/exams.csv" +
                    " --out " + d + "/agg.csv",
                dir / "aggregate.out");
    rc |= shell("classify --in " + d + "/agg.csv --out " + d + "/labels.csv",
                dir / "classify.out");
    rc |= shell("anova --in " + d + "/agg.csv --out " + d + "/anova.csv", dir / "anova.out");
    rc |= shell("step --in " + d + "/agg.csv --out " + d + "/step.csv", dir / "step.out");
    rc |= shell("experiment --config " + ecfg_b.string() + " --seed 9 --out " + d + "/exp_b",
                dir / "experiment_b.out");
    rc |= shell("experiment --config " + ecfg_s.string() + " --seed 9 --out " + d + "/exp_s",
                dir / "experiment_s.out");
    rc |= shell("grade-demo --answers 1,1,1,1,1,1,1,0,1", dir / "grade-demo.out");
    rc |= shell("pmf-dump --m 10 --k 0 --grades 0,0.5,1", dir / "pmf-dump.out");
    if (rc != 0) {
      c.fail("a subcommand exited nonzero on pass " + std::to_string(pass));
      return c;
    }
  }

  const std::vector<std::string> files = {
      "sim/answers.csv", "sim/exams.csv",   "sim/bank.json",      "agg.csv",
      "labels.csv",      "anova.csv",       "step.csv",           "exp_b/assignment.csv",
      "exp_b/effect.csv", "exp_b/summary.txt", "exp_s/treated.csv", "exp_s/effect.csv",
      "exp_s/summary.txt", "simulate.out",  "aggregate.out",      "classify.out",
      "anova.out",       "step.out",        "experiment_b.out",   "experiment_s.out",
      "grade-demo.out",  "pmf-dump.out"};
  int compared = 0;
  for (const auto& f : files) {
    const auto a = slurp(root / "pass1" / f);
    const auto b = slurp(root / "pass2" / f);
    if (a.empty() && f != "simulate.out") {
      c.fail("missing or empty output " + f);
      continue;
    }
    if (a != b) c.fail("outputs differ: " + f);
    ++compared;
  }
  c.note(std::to_string(compared) + " outputs byte-identical across runs");

  // uniform pmf rows really are 0.1
  const auto pmf = slurp(root / "pass1" / "pmf-dump.out");
  if (pmf.find("1,0.1\n") == std::string::npos) c.fail("pmf-dump uniform rows missing");
  fs::remove_all(root);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "OLS oracle equivalence", criterion_ols_oracle},
      {2, "ANOVA treatment-coding identity", criterion_anova_identity},
      {3, "quadratic vertices", criterion_vertices},
      {4, "timeout curve", criterion_timeout},
      {5, "grading clamp table and trap", criterion_grading},
      {6, "allocation pmf properties", criterion_pmf},
      {7, "simulation qualitative reproduction", criterion_simulation},
      {8, "stepwise AIC recovery", criterion_stepwise},
      {9, "experiment evaluator calibration", criterion_experiments},
      {10, "CLI determinism", [&] { return criterion_cli_determinism(cli); }},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check c;
    try {
      c = criterion.run();
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    if (!c.pass) ++failures;
    std::printf("criterion %2d [%s] %s%s%s\n", criterion.id, c.pass ? "PASS" : "FAIL",
                criterion.name, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
