#include "drillsim/cli.hpp"

#include <filesystem>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "drillsim/analytics.hpp"
#include "drillsim/csv.hpp"
#include "drillsim/experiment.hpp"
#include "drillsim/itembank.hpp"
#include "drillsim/stats.hpp"

namespace drillsim::cli {

namespace fs = std::filesystem;

AllocationParams alloc_from_config(const Config& cfg) {
  AllocationParams p;
  p.k = cfg.get_double("allocation.k", 4.0);
  p.p_hist = cfg.get_double("allocation.p_hist", 0.1);
  p.validate();
  return p;
}

GradingScheme scheme_from_config(const Config& cfg) {
  return parse_grading_scheme(cfg.get_string("grading.scheme", "last8"));
}

BehaviorModel model_from_config(const Config& cfg) {
  BehaviorModel m;
  m.guess_floor = cfg.get_double("sim.guess_floor", m.guess_floor);
  m.difficulty_scale = cfg.get_double("sim.difficulty_scale", m.difficulty_scale);
  m.time_median_base = cfg.get_double("sim.time_median_base", m.time_median_base);
  m.time_sigma = cfg.get_double("sim.time_sigma", m.time_sigma);
  m.target_grade = cfg.get_double("sim.target_grade", m.target_grade);
  m.max_attempts = cfg.get_int("sim.max_attempts", m.max_attempts);
  m.engagement_threshold = cfg.get_double("sim.engagement_threshold", m.engagement_threshold);
  m.stop_sign_time_factor = cfg.get_double("sim.stop_sign_time_factor", m.stop_sign_time_factor);
  m.timeout_frustration = cfg.get_double("sim.timeout_frustration", m.timeout_frustration);
  m.exam_scale = cfg.get_double("sim.exam_scale", m.exam_scale);
  m.exam_noise_sd = cfg.get_double("sim.exam_noise_sd", m.exam_noise_sd);
  for (char label : {'G', 'L', 'P', 'U'}) {
    Archetype& a = m.archetypes.at(label);
    const std::string suffix(1, label);
    a.ability_mean = cfg.get_double("sim.ability_mean_" + suffix, a.ability_mean);
    a.ability_sd = cfg.get_double("sim.ability_sd_" + suffix, a.ability_sd);
    a.diligence = cfg.get_double("sim.diligence_" + suffix, a.diligence);
    a.learn_rate = cfg.get_double("sim.learn_rate_" + suffix, a.learn_rate);
  }
  m.timeout_enabled = cfg.get_bool("timeout.enabled", false);
  m.timeout.a = cfg.get_double("timeout.a", m.timeout.a);
  m.timeout.b = cfg.get_double("timeout.b", m.timeout.b);
  m.timeout.g_star = cfg.get_double("timeout.g_star", m.timeout.g_star);
  m.timeout.s = cfg.get_double("timeout.s", m.timeout.s);
  m.validate();
  return m;
}

std::map<char, int> counts_from_config(const Config& cfg) {
  return {{'G', cfg.get_int("sim.count_G", 250)},
          {'L', cfg.get_int("sim.count_L", 250)},
          {'P', cfg.get_int("sim.count_P", 250)},
          {'U', cfg.get_int("sim.count_U", 250)}};
}

std::vector<int> lecture_sizes_from_config(const Config& cfg) {
  const int lectures = cfg.get_int("sim.lectures", 34);
  const int items = cfg.get_int("sim.items_per_lecture", 10);
  if (lectures < 1) throw std::runtime_error("sim.lectures must be >= 1");
  if (items < 1) throw std::runtime_error("sim.items_per_lecture must be >= 1");
  return std::vector<int>(static_cast<size_t>(lectures), items);
}

namespace {

Config load_config(const std::string& path) {
  return path.empty() ? Config() : Config::from_file(path);
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& tok : csv::split_line(s)) {
    auto v = csv::parse_double(tok);
    if (!v) throw std::runtime_error(what + ": not a number: \"" + tok + "\"");
    out.push_back(*v);
  }
  if (out.empty()) throw std::runtime_error(what + ": empty list");
  return out;
}

std::vector<int> parse_answer_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : csv::split_line(s)) {
    auto v = csv::parse_int(tok);
    if (!v || (*v != 0 && *v != 1))
      throw std::runtime_error("--answers: entries must be 0 or 1, got \"" + tok + "\"");
    out.push_back(static_cast<int>(*v));
  }
  if (out.empty()) throw std::runtime_error("--answers: empty list");
  return out;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, const std::string& out_dir,
                 std::ostream& out) {
  Config cfg = load_config(config_path);
  const auto alloc = alloc_from_config(cfg);
  const auto scheme = scheme_from_config(cfg);
  const auto model = model_from_config(cfg);
  const auto bank = build_item_bank(lecture_sizes_from_config(cfg));

  Rng cohort_rng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
  auto cohort = sample_cohort(counts_from_config(cfg), model, cohort_rng);
  auto result = simulate_course(cohort, bank, scheme, alloc, model, seed);

  ensure_dir(out_dir);
  csv::write_file(out_dir + "/answers.csv", serialize_answer_log(result.events));
  csv::write_file(out_dir + "/exams.csv", serialize_exam_table(result.exams));
  csv::write_file(out_dir + "/bank.json", serialize_item_bank(bank));
  out << "students=" << cohort.size() << " lectures=" << bank.lecture_count()
      << " events=" << result.events.size() << "\n";
  return 0;
}

int cmd_aggregate(const std::string& in_path, const std::string& exams_path,
                  const std::string& out_path, std::ostream& out) {
  auto events = load_answer_log(csv::read_file(in_path));
  auto exams = load_exam_table(csv::read_file(exams_path));
  auto aggs = student_aggregates(events, exams);
  csv::write_file(out_path, serialize_aggregates(aggs));
  out << "students=" << aggs.size() << "\n";
  return 0;
}

int cmd_classify(const std::string& in_path, const std::string& out_path, std::ostream& out) {
  auto aggs = load_aggregates(csv::read_file(in_path));
  auto glup = glup_classify(aggs);
  std::string labels = "student_id,label\n";
  for (const auto& [sid, label] : glup.labels) {
    labels += sid;
    labels += ',';
    labels += label;
    labels += '\n';
  }
  csv::write_file(out_path, labels);
  auto counts = glup.counts();
  out << "median_g1=" << csv::format_double(glup.median_grade)
      << " median_T1=" << csv::format_double(glup.median_time) << " G=" << counts.at('G')
      << " L=" << counts.at('L') << " P=" << counts.at('P') << " U=" << counts.at('U') << "\n";
  return 0;
}

int cmd_anova(const std::string& in_path, const std::string& out_path, std::ostream& out) {
  auto aggs = load_aggregates(csv::read_file(in_path));
  auto glup = glup_classify(aggs);
  auto fit = anova_improvement(aggs, glup);
  csv::write_file(out_path, serialize_fit(fit));
  out << "n=" << fit.n << " rss=" << csv::format_double(fit.rss) << "\n";
  return 0;
}

int cmd_step(const std::string& in_path, const std::string& out_path, std::ostream& out) {
  auto aggs = load_aggregates(csv::read_file(in_path));
  auto glup = glup_classify(aggs);
  auto frame = final_grade_frame(aggs, glup);

  // a term with no variation (e.g. every student slower on the last item
  // than the first) would alias the intercept; leave it out of the scope
  std::vector<std::string> terms, excluded;
  for (const auto& name : final_grade_terms()) {
    const auto& col = frame.table.col(name);
    bool varies;
    if (col.categorical) {
      varies = std::set<std::string>(col.cat.begin(), col.cat.end()).size() > 1;
    } else {
      varies = std::set<double>(col.num.begin(), col.num.end()).size() > 1;
    }
    (varies ? terms : excluded).push_back(name);
  }

  auto step = step_aic(terms, frame.table, "finalG");
  csv::write_file(out_path, serialize_fit(step.fit));
  out << "dropped_rows=" << frame.dropped << " aic=" << csv::format_double(step.fit.aic);
  if (!excluded.empty()) {
    out << " constant_terms_excluded=";
    for (size_t i = 0; i < excluded.size(); ++i) out << (i ? "," : "") << excluded[i];
  }
  out << " selected=";
  for (size_t i = 0; i < step.terms.size(); ++i) out << (i ? "," : "") << step.terms[i];
  out << "\n";
  return 0;
}

int cmd_experiment(const std::string& config_path, std::uint64_t seed,
                   const std::string& out_dir, std::ostream& out) {
  Config cfg = load_config(config_path);
  const auto alloc = alloc_from_config(cfg);
  const auto scheme = scheme_from_config(cfg);
  const auto model = model_from_config(cfg);
  const std::string design_name = cfg.get_string("experiment.design", "timeout_b");
  ensure_dir(out_dir);

  if (design_name == "timeout_b" || design_name == "timeout_gstar") {
    TimeoutDesign design;
    design.vary = design_name == "timeout_b" ? TimeoutField::B : TimeoutField::GStar;
    design.base = model.timeout;
    if (design.vary == TimeoutField::B) {
      design.lo = cfg.get_double("experiment.lo", 1.0);
      design.hi = cfg.get_double("experiment.hi", 4.0);
    } else {
      design.lo = cfg.get_double("experiment.lo", 3.0);
      design.hi = cfg.get_double("experiment.hi", 7.0);
    }
    design.validate();

    const auto bank = build_item_bank(lecture_sizes_from_config(cfg));
    Rng cohort_rng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
    auto cohort = sample_cohort(counts_from_config(cfg), model, cohort_rng);

    std::vector<std::string> ids;
    ids.reserve(cohort.size());
    for (const auto& s : cohort) ids.push_back(s.student_id);
    auto assignment = assign_timeout(design, ids, bank.lecture_count(), seed);

    TimeoutAssignmentMap per_cell;
    for (const auto& r : assignment) {
      TimeoutParams tp = design.base;
      if (design.vary == TimeoutField::B)
        tp.b = r.value;
      else
        tp.g_star = r.value;
      per_cell[{r.student_id, r.lecture}] = tp;
    }

    auto result = simulate_course(cohort, bank, scheme, alloc, model, seed, &per_cell);
    const std::string outcome_name =
        cfg.get_string("experiment.outcome", "attempts_per_lecture");
    TimeoutOutcome outcome;
    if (outcome_name == "attempts_per_lecture")
      outcome = TimeoutOutcome::AttemptsPerLecture;
    else if (outcome_name == "final_exam")
      outcome = TimeoutOutcome::FinalExam;
    else
      throw std::runtime_error("experiment.outcome must be attempts_per_lecture or final_exam");

    auto fit = evaluate_timeout_effect(result.events, assignment, outcome, &result.exams);
    csv::write_file(out_dir + "/assignment.csv", serialize_timeout_assignment(assignment));
    csv::write_file(out_dir + "/effect.csv", serialize_fit(fit));
    std::ostringstream summary;
    summary << "design: " << design_name << " on [" << csv::format_double(design.lo) << ", "
            << csv::format_double(design.hi) << "]\n"
            << "outcome: " << outcome_name << "\n"
            << "cells: " << assignment.size() << "\n"
            << "slope: " << csv::format_double(fit.estimates[1]) << " (se "
            << csv::format_double(fit.std_errors[1]) << ", t "
            << csv::format_double(fit.t_values[1]) << ", p "
            << csv::format_double(fit.p_values[1]) << ")\n";
    csv::write_file(out_dir + "/summary.txt", summary.str());
    out << "slope=" << csv::format_double(fit.estimates[1])
        << " p=" << csv::format_double(fit.p_values[1]) << "\n";
    return 0;
  }

  if (design_name == "stop_sign") {
    const int classify_lectures = cfg.get_int("experiment.classify_lectures", 3);
    const int followup_lectures = cfg.get_int("experiment.followup_lectures", 3);
    if (classify_lectures < 1 || followup_lectures < 1)
      throw std::runtime_error("experiment lecture windows must be >= 1");
    const int items = cfg.get_int("sim.items_per_lecture", 10);
    const auto bank = build_item_bank(std::vector<int>(
        static_cast<size_t>(classify_lectures + followup_lectures), items));

    Rng cohort_rng = Rng::keyed(seed, "cohort", 0, StreamKind::Cohort);
    auto cohort = sample_cohort(counts_from_config(cfg), model, cohort_rng);

    auto phase_a =
        simulate_course(cohort, bank, scheme, alloc, model, seed, nullptr, 1, classify_lectures);
    auto aggs_a = student_aggregates(phase_a.events, phase_a.exams);
    auto before = glup_classify(aggs_a);

    auto treated = assign_stop_signs(before, seed);
    auto followup_cohort = phase_a.students;
    for (auto& s : followup_cohort) s.stop_sign = treated.count(s.student_id) > 0;

    auto phase_b = simulate_course(followup_cohort, bank, scheme, alloc, model, seed, nullptr,
                                   classify_lectures + 1, classify_lectures + followup_lectures);
    auto aggs_b = student_aggregates(phase_b.events, phase_b.exams);
    auto after = classify_with_medians(aggs_b, before.median_grade, before.median_time);

    auto effect = evaluate_stop_sign_effect(before, after, treated);

    std::string treated_csv = "student_id\n";
    for (const auto& sid : treated) treated_csv += sid + "\n";
    csv::write_file(out_dir + "/treated.csv", treated_csv);
    csv::write_file(out_dir + "/effect.csv", serialize_stop_sign_effect(effect));
    std::ostringstream summary;
    summary << "design: stop_sign, " << effect.n_treated << " treated vs " << effect.n_control
            << " control P students\n"
            << "exit rates: treated " << csv::format_double(effect.exit_treated) << ", control "
            << csv::format_double(effect.exit_control) << "\n"
            << "difference: " << csv::format_double(effect.difference) << " (z "
            << csv::format_double(effect.z) << ", p " << csv::format_double(effect.p) << ")\n";
    csv::write_file(out_dir + "/summary.txt", summary.str());
    out << "difference=" << csv::format_double(effect.difference)
        << " p=" << csv::format_double(effect.p) << "\n";
    return 0;
  }

  throw std::runtime_error("experiment.design must be timeout_b, timeout_gstar or stop_sign");
}

int cmd_grade_demo(const std::string& answers_arg, const std::string& out_path,
                   std::ostream& out) {
  auto answers = parse_answer_list(answers_arg);
  std::string table = "i,answer,last8,window,window_tapered\n";
  std::vector<int> prefix;
  for (size_t i = 0; i < answers.size(); ++i) {
    prefix.push_back(answers[i]);
    table += std::to_string(i + 1);
    table += ',';
    table += std::to_string(answers[i]);
    table += ',';
    table += csv::format_double(grade(prefix, GradingScheme::Last8));
    table += ',';
    table += csv::format_double(grade(prefix, GradingScheme::WindowNg));
    table += ',';
    table += csv::format_double(grade(prefix, GradingScheme::WindowNgTapered));
    table += '\n';
  }
  if (out_path.empty())
    out << table;
  else
    csv::write_file(out_path, table);
  return 0;
}

int cmd_pmf_dump(int m, double k, const std::string& grades_arg, const std::string& out_path,
                 std::ostream& out) {
  AllocationParams params;
  params.k = k;
  auto grades = parse_double_list(grades_arg, "--grades");
  std::string table = "grade,rank,probability\n";
  for (double g : grades) {
    auto dist = iaa_pmf(g, m, params);
    for (int r = 1; r <= dist.size(); ++r) {
      table += csv::format_double(g);
      table += ',';
      table += std::to_string(r);
      table += ',';
      table += csv::format_double(dist.probabilities[static_cast<size_t>(r - 1)]);
      table += '\n';
    }
  }
  if (out_path.empty())
    out << table;
  else
    csv::write_file(out_path, table);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"drillsim: adaptive drilling simulator and experiment lab"};
  app.require_subcommand(1);

  std::string config_path, in_path, exams_path, out_path, answers_arg, grades_arg;
  std::uint64_t seed = 0;
  int m = 10;
  double k = 4.0;

  auto* sim = app.add_subcommand("simulate", "simulate a cohort, write answer/exam CSVs");
  sim->add_option("--config", config_path, "config file");
  sim->add_option("--seed", seed, "random seed")->required();
  sim->add_option("--out", out_path, "output directory")->required();

  auto* agg = app.add_subcommand("aggregate", "per-student aggregates from an answer log");
  agg->add_option("--in", in_path, "answer log CSV")->required();
  agg->add_option("--exams", exams_path, "exam grades CSV")->required();
  agg->add_option("--out", out_path, "aggregates CSV")->required();

  auto* cls = app.add_subcommand("classify", "GLUP classification of aggregates");
  cls->add_option("--in", in_path, "aggregates CSV")->required();
  cls->add_option("--out", out_path, "labels CSV")->required();

  auto* anv = app.add_subcommand("anova", "improvement-on-class ANOVA table");
  anv->add_option("--in", in_path, "aggregates CSV")->required();
  anv->add_option("--out", out_path, "fit CSV")->required();

  auto* stp = app.add_subcommand("step", "AIC-stepwise final-grade model");
  stp->add_option("--in", in_path, "aggregates CSV")->required();
  stp->add_option("--out", out_path, "fit CSV")->required();

  auto* exp = app.add_subcommand("experiment", "run a randomized design end to end");
  exp->add_option("--config", config_path, "config file");
  exp->add_option("--seed", seed, "random seed")->required();
  exp->add_option("--out", out_path, "output directory")->required();

  auto* dem = app.add_subcommand("grade-demo", "grade trace for a 0/1 answer sequence");
  dem->add_option("--answers", answers_arg, "comma-separated 0/1 sequence")->required();
  dem->add_option("--out", out_path, "trace CSV (stdout when omitted)");

  auto* pmf = app.add_subcommand("pmf-dump", "allocation pmf over a grade grid");
  pmf->add_option("--m", m, "items in the lecture");
  pmf->add_option("--k", k, "concentration");
  pmf->add_option("--grades", grades_arg, "comma-separated grades")->required();
  pmf->add_option("--out", out_path, "pmf CSV (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, seed, out_path, out);
    if (agg->parsed()) return cmd_aggregate(in_path, exams_path, out_path, out);
    if (cls->parsed()) return cmd_classify(in_path, out_path, out);
    if (anv->parsed()) return cmd_anova(in_path, out_path, out);
    if (stp->parsed()) return cmd_step(in_path, out_path, out);
    if (exp->parsed()) return cmd_experiment(config_path, seed, out_path, out);
    if (dem->parsed()) return cmd_grade_demo(answers_arg, out_path, out);
    if (pmf->parsed()) return cmd_pmf_dump(m, k, grades_arg, out_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand\n" << app.help();
  return 2;
}

}  // namespace drillsim::cli
