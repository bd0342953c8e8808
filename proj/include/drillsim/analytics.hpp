#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "drillsim/itembank.hpp"

namespace drillsim {

// Quadrant classification on median splits of first-item grade and time:
// G fast+right, L slow+right, P fast+wrong, U slow+wrong. Ties ( >= median )
// count as "right" and "long".
struct GlupResult {
  double median_grade = 0.0;  // median of g1
  double median_time = 0.0;   // median of T1
  std::vector<std::pair<std::string, char>> labels;  // aggregate order

  std::map<std::string, char> label_map() const;
  std::map<char, int> counts() const;
};

char glup_label(double g1, double t1, double median_grade, double median_time);

GlupResult glup_classify(const std::vector<StudentAggregates>& aggregates);

// Classification against externally fixed medians (follow-up windows keep the
// original split so "moving out of P" is measured against the same line).
GlupResult classify_with_medians(const std::vector<StudentAggregates>& aggregates,
                                 double median_grade, double median_time);

struct FitResult {
  std::vector<std::string> terms;  // coefficient names, intercept first
  std::vector<double> estimates;
  std::vector<double> std_errors;
  std::vector<double> t_values;
  std::vector<double> p_values;
  double rss = 0.0;
  int n = 0;
  int p = 0;  // coefficient count incl. intercept
  double aic = 0.0;

  int find_term(const std::string& name) const;  // -1 if absent
};

// Least squares with the usual sigma^2 (X'X)^-1 errors, t statistics,
// two-sided p-values and AIC = n ln(RSS/n) + 2p. The design must carry its
// intercept column explicitly. Rank deficiency names the offending column.
FitResult ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                  const std::vector<std::string>& coef_names);

// Column-oriented table: numeric columns plus categorical ones that expand
// to treatment-coded dummies when a design is built.
struct DataTable {
  struct Column {
    std::string name;
    bool categorical = false;
    std::vector<double> num;
    std::vector<std::string> cat;
  };
  std::vector<Column> cols;

  size_t nrow() const;
  void add_numeric(const std::string& name, std::vector<double> values);
  void add_categorical(const std::string& name, std::vector<std::string> values);
  const Column& col(const std::string& name) const;
  bool has(const std::string& name) const;
};

struct Design {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> coef_names;
};

// Intercept plus one block per term; categorical terms get one dummy per
// non-baseline level (baseline "P" when present, else the first level).
Design build_design(const DataTable& table, const std::vector<std::string>& terms,
                    const std::string& y_name);

FitResult fit_model(const DataTable& table, const std::vector<std::string>& terms,
                    const std::string& y_name);

// improvement = final_g - status_g regressed on the GLUP factor, baseline P,
// terms (Intercept, classG, classL, classU).
FitResult anova_improvement(const std::vector<StudentAggregates>& aggregates,
                            const GlupResult& glup);

struct StepResult {
  FitResult fit;
  std::vector<std::string> terms;  // selected terms, full-set order
};

// Greedy both-direction AIC descent from the full model. Tie-break is
// deterministic: deletions before additions, then lexicographic term order.
StepResult step_aic(const std::vector<std::string>& full_terms, const DataTable& table,
                    const std::string& y_name);

// Stationary point of b1*x + b2*x^2.
double quadratic_vertex(double beta_linear, double beta_quadratic);

struct FeatureFrame {
  DataTable table;
  int dropped = 0;  // rows without a defined g5/T5
};

// Per-student modeling frame for predicting the final exam: statusG, g1, g5, gn, T1, T5, Tn, their squares,
// the Tn>T1 indicator, GLUP class, twnattl and its square, finalG.
FeatureFrame final_grade_frame(const std::vector<StudentAggregates>& aggregates,
                                  const GlupResult& glup);

// Term names for the full final-grade model (everything except finalG).
std::vector<std::string> final_grade_terms();

// CSV with columns term,estimate,std_error,t_value,p_value.
std::string serialize_fit(const FitResult& fit);

}  // namespace drillsim
