#include "drillsim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "drillsim/csv.hpp"
#include "drillsim/stats.hpp"

namespace drillsim {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::map<std::string, char> GlupResult::label_map() const {
  std::map<std::string, char> m;
  for (const auto& [sid, c] : labels) m[sid] = c;
  return m;
}

std::map<char, int> GlupResult::counts() const {
  std::map<char, int> m{{'G', 0}, {'L', 0}, {'P', 0}, {'U', 0}};
  for (const auto& [sid, c] : labels) ++m[c];
  return m;
}

char glup_label(double g1, double t1, double median_grade, double median_time) {
  const bool right = g1 >= median_grade;
  const bool slow = t1 >= median_time;
  if (right) return slow ? 'L' : 'G';
  return slow ? 'U' : 'P';
}

GlupResult glup_classify(const std::vector<StudentAggregates>& aggregates) {
  if (aggregates.size() < 2)
    throw std::invalid_argument("glup_classify: need at least 2 classifiable students");
  std::vector<double> g1s, t1s;
  g1s.reserve(aggregates.size());
  t1s.reserve(aggregates.size());
  for (const auto& a : aggregates) {
    g1s.push_back(a.g1);
    t1s.push_back(a.T1);
  }
  return classify_with_medians(aggregates, median(std::move(g1s)), median(std::move(t1s)));
}

GlupResult classify_with_medians(const std::vector<StudentAggregates>& aggregates,
                                 double median_grade, double median_time) {
  GlupResult res;
  res.median_grade = median_grade;
  res.median_time = median_time;
  res.labels.reserve(aggregates.size());
  for (const auto& a : aggregates)
    res.labels.emplace_back(a.student_id, glup_label(a.g1, a.T1, median_grade, median_time));
  return res;
}

int FitResult::find_term(const std::string& name) const {
  for (size_t i = 0; i < terms.size(); ++i)
    if (terms[i] == name) return static_cast<int>(i);
  return -1;
}

FitResult ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                  const std::vector<std::string>& coef_names) {
  const int n = static_cast<int>(design.rows());
  const int p = static_cast<int>(design.cols());
  if (static_cast<int>(coef_names.size()) != p)
    throw std::invalid_argument("ols_fit: need one name per design column");
  if (n <= p)
    throw std::invalid_argument("ols_fit: need n > p, got n=" + std::to_string(n) +
                                " p=" + std::to_string(p));
  if (y.size() != n) throw std::invalid_argument("ols_fit: y length must match design rows");

  // equilibrate columns so the rank decision is scale-free (squared terms can
  // dwarf fractions by orders of magnitude)
  Eigen::VectorXd scale(p);
  for (int j = 0; j < p; ++j) {
    const double norm = design.col(j).norm();
    scale[j] = norm > 0.0 ? norm : 1.0;
  }
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  if (qr.rank() < p) {
    // the first pivot beyond the numerical rank is the dependent column
    const auto perm = qr.colsPermutation().indices();
    const int bad = perm[qr.rank()];
    throw std::invalid_argument("ols_fit: design is rank deficient, column \"" +
                                coef_names[static_cast<size_t>(bad)] + "\" is collinear");
  }

  FitResult fit;
  fit.terms = coef_names;
  fit.n = n;
  fit.p = p;

  Eigen::VectorXd beta = scale.cwiseInverse().asDiagonal() * qr.solve(y);
  Eigen::VectorXd resid = y - design * beta;
  fit.rss = resid.squaredNorm();

  const double sigma2 = fit.rss / (n - p);
  Eigen::MatrixXd xtx_inv = scale.cwiseInverse().asDiagonal() *
                            (scaled.transpose() * scaled).inverse() *
                            scale.cwiseInverse().asDiagonal();

  fit.estimates.resize(static_cast<size_t>(p));
  fit.std_errors.resize(static_cast<size_t>(p));
  fit.t_values.resize(static_cast<size_t>(p));
  fit.p_values.resize(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    fit.estimates[static_cast<size_t>(j)] = beta[j];
    const double se = std::sqrt(sigma2 * xtx_inv(j, j));
    fit.std_errors[static_cast<size_t>(j)] = se;
    if (se > 0.0) {
      const double t = beta[j] / se;
      fit.t_values[static_cast<size_t>(j)] = t;
      fit.p_values[static_cast<size_t>(j)] = t_two_sided_p(t, n - p);
    } else {
      fit.t_values[static_cast<size_t>(j)] = std::numeric_limits<double>::quiet_NaN();
      fit.p_values[static_cast<size_t>(j)] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  fit.aic = fit.rss > 0.0 ? n * std::log(fit.rss / n) + 2.0 * p
                          : -std::numeric_limits<double>::infinity();
  return fit;
}

size_t DataTable::nrow() const { return cols.empty() ? 0 : std::max(cols[0].num.size(), cols[0].cat.size()); }

void DataTable::add_numeric(const std::string& name, std::vector<double> values) {
  Column c;
  c.name = name;
  c.num = std::move(values);
  cols.push_back(std::move(c));
}

void DataTable::add_categorical(const std::string& name, std::vector<std::string> values) {
  Column c;
  c.name = name;
  c.categorical = true;
  c.cat = std::move(values);
  cols.push_back(std::move(c));
}

const DataTable::Column& DataTable::col(const std::string& name) const {
  for (const auto& c : cols)
    if (c.name == name) return c;
  throw std::invalid_argument("no column \"" + name + "\"");
}

bool DataTable::has(const std::string& name) const {
  for (const auto& c : cols)
    if (c.name == name) return true;
  return false;
}

Design build_design(const DataTable& table, const std::vector<std::string>& terms,
                    const std::string& y_name) {
  const size_t n = table.nrow();
  const auto& ycol = table.col(y_name);
  if (ycol.categorical) throw std::invalid_argument("response \"" + y_name + "\" is categorical");

  struct Block {
    const DataTable::Column* col;
    std::vector<std::string> dummy_levels;  // empty for numeric
  };
  std::vector<Block> blocks;
  int ncoef = 1;
  for (const auto& term : terms) {
    Block b;
    b.col = &table.col(term);
    if (b.col->categorical) {
      std::set<std::string> levels(b.col->cat.begin(), b.col->cat.end());
      // treatment coding, baseline P when present (the reference group)
      std::string baseline = levels.count("P") ? "P" : *levels.begin();
      for (const auto& lv : levels)
        if (lv != baseline) b.dummy_levels.push_back(lv);
      ncoef += static_cast<int>(b.dummy_levels.size());
    } else {
      ++ncoef;
    }
    blocks.push_back(std::move(b));
  }

  Design d;
  d.X.resize(static_cast<Eigen::Index>(n), ncoef);
  d.y.resize(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) d.y[static_cast<Eigen::Index>(i)] = ycol.num[i];
  d.coef_names.push_back("(Intercept)");
  d.X.col(0).setOnes();
  int j = 1;
  for (const auto& b : blocks) {
    if (b.col->categorical) {
      for (const auto& lv : b.dummy_levels) {
        for (size_t i = 0; i < n; ++i)
          d.X(static_cast<Eigen::Index>(i), j) = b.col->cat[i] == lv ? 1.0 : 0.0;
        d.coef_names.push_back(b.col->name + lv);
        ++j;
      }
    } else {
      for (size_t i = 0; i < n; ++i) d.X(static_cast<Eigen::Index>(i), j) = b.col->num[i];
      d.coef_names.push_back(b.col->name);
      ++j;
    }
  }
  return d;
}

FitResult fit_model(const DataTable& table, const std::vector<std::string>& terms,
                    const std::string& y_name) {
  Design d = build_design(table, terms, y_name);
  return ols_fit(d.X, d.y, d.coef_names);
}

FitResult anova_improvement(const std::vector<StudentAggregates>& aggregates,
                            const GlupResult& glup) {
  auto labels = glup.label_map();
  DataTable t;
  std::vector<double> improvement;
  std::vector<std::string> cls;
  improvement.reserve(aggregates.size());
  for (const auto& a : aggregates) {
    auto it = labels.find(a.student_id);
    if (it == labels.end())
      throw std::invalid_argument("anova_improvement: student " + a.student_id +
                                  " has no GLUP label");
    improvement.push_back(a.final_g - a.status_g);
    cls.emplace_back(1, it->second);
  }
  std::map<char, int> counts{{'G', 0}, {'L', 0}, {'P', 0}, {'U', 0}};
  for (const auto& c : cls) ++counts[c[0]];
  std::string empty;
  for (const auto& [label, count] : counts)
    if (count == 0) empty += std::string(empty.empty() ? "" : ", ") + label;
  if (!empty.empty())
    throw std::invalid_argument("anova_improvement: empty classes: " + empty);

  t.add_numeric("improvement", std::move(improvement));
  t.add_categorical("class", std::move(cls));
  return fit_model(t, {"class"}, "improvement");
}

StepResult step_aic(const std::vector<std::string>& full_terms, const DataTable& table,
                    const std::string& y_name) {
  std::vector<std::string> current = full_terms;
  FitResult fit = fit_model(table, current, y_name);

  auto in_current = [&](const std::string& t) {
    return std::find(current.begin(), current.end(), t) != current.end();
  };
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };

  for (;;) {
    double best_aic = fit.aic;
    std::vector<std::string> best_terms;
    bool moved = false;

    // deletions first, in lexicographic term order
    for (const auto& t : sorted(current)) {
      std::vector<std::string> cand = current;
      cand.erase(std::find(cand.begin(), cand.end(), t));
      FitResult f = fit_model(table, cand, y_name);
      if (f.aic < best_aic) {
        best_aic = f.aic;
        best_terms = std::move(cand);
        moved = true;
      }
    }
    // then re-additions of previously dropped terms
    std::vector<std::string> dropped;
    for (const auto& t : full_terms)
      if (!in_current(t)) dropped.push_back(t);
    for (const auto& t : sorted(dropped)) {
      std::vector<std::string> cand;
      for (const auto& ft : full_terms)  // keep full-set order
        if (in_current(ft) || ft == t) cand.push_back(ft);
      FitResult f = fit_model(table, cand, y_name);
      if (f.aic < best_aic) {
        best_aic = f.aic;
        best_terms = std::move(cand);
        moved = true;
      }
    }

    if (!moved) break;
    // normalize to full-set order so repeated runs walk identical paths
    std::vector<std::string> normalized;
    for (const auto& ft : full_terms)
      if (std::find(best_terms.begin(), best_terms.end(), ft) != best_terms.end())
        normalized.push_back(ft);
    current = std::move(normalized);
    fit = fit_model(table, current, y_name);
  }

  return StepResult{std::move(fit), std::move(current)};
}

double quadratic_vertex(double beta_linear, double beta_quadratic) {
  if (beta_quadratic == 0.0)
    throw std::invalid_argument("quadratic_vertex: quadratic coefficient is zero, no vertex");
  return -beta_linear / (2.0 * beta_quadratic);
}

FeatureFrame final_grade_frame(const std::vector<StudentAggregates>& aggregates,
                                  const GlupResult& glup) {
  if (aggregates.empty()) throw std::invalid_argument("final_grade_frame: no students");
  auto labels = glup.label_map();

  FeatureFrame out;
  std::vector<double> statusG, g1, g5, gn, T1, T5, Tn, T1sq, T5sq, Tnsq, tngt, twn, twn2, finalG;
  std::vector<std::string> cls;
  for (const auto& a : aggregates) {
    if (!a.g5 || !a.T5) {
      ++out.dropped;
      continue;
    }
    auto it = labels.find(a.student_id);
    if (it == labels.end())
      throw std::invalid_argument("final_grade_frame: student " + a.student_id +
                                  " has no GLUP label");
    statusG.push_back(a.status_g);
    g1.push_back(a.g1);
    g5.push_back(*a.g5);
    gn.push_back(a.gn);
    T1.push_back(a.T1);
    T5.push_back(*a.T5);
    Tn.push_back(a.Tn);
    T1sq.push_back(a.T1 * a.T1);
    T5sq.push_back(*a.T5 * *a.T5);
    Tnsq.push_back(a.Tn * a.Tn);
    tngt.push_back(a.tn_gt_t1 ? 1.0 : 0.0);
    cls.emplace_back(1, it->second);
    twn.push_back(a.twnattl);
    twn2.push_back(a.twnattl * a.twnattl);
    finalG.push_back(a.final_g);
  }
  if (statusG.empty())
    throw std::invalid_argument("final_grade_frame: no students with a defined g5/T5");

  DataTable& t = out.table;
  t.add_numeric("statusG", std::move(statusG));
  t.add_numeric("g1", std::move(g1));
  t.add_numeric("g5", std::move(g5));
  t.add_numeric("gn", std::move(gn));
  t.add_numeric("T1", std::move(T1));
  t.add_numeric("T5", std::move(T5));
  t.add_numeric("Tn", std::move(Tn));
  t.add_numeric("T1.2", std::move(T1sq));
  t.add_numeric("T5.2", std::move(T5sq));
  t.add_numeric("Tn.2", std::move(Tnsq));
  t.add_numeric("Tn_gt_T1", std::move(tngt));
  t.add_categorical("class", std::move(cls));
  t.add_numeric("twnattl", std::move(twn));
  t.add_numeric("twnattl2", std::move(twn2));
  t.add_numeric("finalG", std::move(finalG));
  return out;
}

std::vector<std::string> final_grade_terms() {
  return {"statusG", "g1", "g5", "gn", "T1", "T5", "Tn", "T1.2", "T5.2", "Tn.2",
          "Tn_gt_T1", "class", "twnattl", "twnattl2"};
}

std::string serialize_fit(const FitResult& fit) {
  std::string out = "term,estimate,std_error,t_value,p_value\n";
  for (size_t i = 0; i < fit.terms.size(); ++i) {
    out += fit.terms[i];
    out += ',';
    out += csv::format_double(fit.estimates[i]);
    out += ',';
    out += csv::format_double(fit.std_errors[i]);
    out += ',';
    out += csv::format_double(fit.t_values[i]);
    out += ',';
    out += csv::format_double(fit.p_values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace drillsim
