#include "drillsim/itembank.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "drillsim/csv.hpp"

namespace drillsim {

namespace {

const std::vector<std::string> kLogHeader = {"student_id", "lecture_id", "item_id", "seq",
                                             "time_min",   "correct",    "grade_after"};
const std::vector<std::string> kExamHeader = {"student_id", "status_g", "final_g"};
const std::vector<std::string> kAggHeader = {"student_id", "status_g", "final_g", "g1", "g5",
                                             "gn",         "T1",       "T5",      "Tn", "tn_gt_t1",
                                             "twnattl"};

[[noreturn]] void row_error(size_t line, const std::string& field, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ", field " << field << ": " << what;
  throw std::runtime_error(msg.str());
}

double parse_num(const std::string& raw, size_t line, const std::string& field) {
  auto v = csv::parse_double(raw);
  if (!v) row_error(line, field, "not a number: \"" + raw + "\"");
  return *v;
}

long long parse_integer(const std::string& raw, size_t line, const std::string& field) {
  auto v = csv::parse_int(raw);
  if (!v) row_error(line, field, "not an integer: \"" + raw + "\"");
  return *v;
}

std::string lecture_name(int ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "L%02d", ordinal);
  return buf;
}

}  // namespace

const Lecture& ItemBank::lecture(int ordinal) const {
  if (ordinal < 1 || ordinal > lecture_count())
    throw std::out_of_range("lecture ordinal " + std::to_string(ordinal) + " out of range");
  return lectures[static_cast<size_t>(ordinal - 1)];
}

std::vector<AnswerEvent> load_answer_log(const std::string& text) {
  csv::Table t = csv::parse(text, kLogHeader);
  std::vector<AnswerEvent> events;
  events.reserve(t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const size_t line = i + 2;  // header is line 1
    AnswerEvent e;
    e.student_id = r[0];
    e.lecture_id = r[1];
    e.item_id = r[2];
    if (e.student_id.empty()) row_error(line, "student_id", "empty");
    if (e.lecture_id.empty()) row_error(line, "lecture_id", "empty");
    if (e.item_id.empty()) row_error(line, "item_id", "empty");
    long long seq = parse_integer(r[3], line, "seq");
    if (seq < 1) row_error(line, "seq", "must be >= 1");
    e.seq = static_cast<int>(seq);
    e.time_min = parse_num(r[4], line, "time_min");
    if (!(e.time_min > 0)) row_error(line, "time_min", "must be strictly positive");
    long long correct = parse_integer(r[5], line, "correct");
    if (correct != 0 && correct != 1) row_error(line, "correct", "must be 0 or 1");
    e.correct = static_cast<int>(correct);
    e.grade_after = parse_num(r[6], line, "grade_after");
    if (e.grade_after < 0.0 || e.grade_after > 1.0)
      row_error(line, "grade_after", "must be in [0,1]");
    events.push_back(std::move(e));
  }

  // seq values per (student, lecture) must be exactly 1..max
  std::map<std::pair<std::string, std::string>, std::set<int>> seqs;
  for (const auto& e : events) seqs[{e.student_id, e.lecture_id}].insert(e.seq);
  for (const auto& [key, s] : seqs) {
    if (static_cast<int>(s.size()) != *s.rbegin() || *s.begin() != 1) {
      throw std::runtime_error("events for (" + key.first + ", " + key.second +
                               "): seq values not contiguous from 1");
    }
  }
  return events;
}

std::string serialize_answer_log(const std::vector<AnswerEvent>& events) {
  std::string out = "student_id,lecture_id,item_id,seq,time_min,correct,grade_after\n";
  for (const auto& e : events) {
    out += e.student_id;
    out += ',';
    out += e.lecture_id;
    out += ',';
    out += e.item_id;
    out += ',';
    out += std::to_string(e.seq);
    out += ',';
    out += csv::format_double(e.time_min);
    out += ',';
    out += std::to_string(e.correct);
    out += ',';
    out += csv::format_double(e.grade_after);
    out += '\n';
  }
  return out;
}

std::map<std::string, ExamGrades> load_exam_table(const std::string& text) {
  csv::Table t = csv::parse(text, kExamHeader);
  std::map<std::string, ExamGrades> exams;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const size_t line = i + 2;
    ExamGrades g;
    g.status_g = parse_num(r[1], line, "status_g");
    g.final_g = parse_num(r[2], line, "final_g");
    if (g.status_g < 0 || g.status_g > 100) row_error(line, "status_g", "must be in [0,100]");
    if (g.final_g < 0 || g.final_g > 100) row_error(line, "final_g", "must be in [0,100]");
    if (!exams.emplace(r[0], g).second)
      row_error(line, "student_id", "duplicate student " + r[0]);
  }
  return exams;
}

std::string serialize_exam_table(const std::map<std::string, ExamGrades>& exams) {
  std::string out = "student_id,status_g,final_g\n";
  for (const auto& [sid, g] : exams) {
    out += sid;
    out += ',';
    out += csv::format_double(g.status_g);
    out += ',';
    out += csv::format_double(g.final_g);
    out += '\n';
  }
  return out;
}

ItemBank build_item_bank(const std::vector<int>& lecture_sizes, const std::string& course_id) {
  if (lecture_sizes.empty()) throw std::invalid_argument("lecture_sizes must be non-empty");
  ItemBank bank;
  bank.course_id = course_id;
  bank.lectures.reserve(lecture_sizes.size());
  for (size_t k = 0; k < lecture_sizes.size(); ++k) {
    if (lecture_sizes[k] < 1)
      throw std::invalid_argument("lecture size must be >= 1, got " +
                                  std::to_string(lecture_sizes[k]) + " at position " +
                                  std::to_string(k + 1));
    Lecture lec;
    lec.ordinal = static_cast<int>(k + 1);
    lec.lecture_id = lecture_name(lec.ordinal);
    lec.items.reserve(static_cast<size_t>(lecture_sizes[k]));
    for (int r = 1; r <= lecture_sizes[k]; ++r) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%s-I%02d", lec.lecture_id.c_str(), r);
      lec.items.push_back(Item{buf, lec.lecture_id, r});
    }
    bank.lectures.push_back(std::move(lec));
  }
  return bank;
}

std::string serialize_item_bank(const ItemBank& bank) {
  nlohmann::ordered_json j;
  j["course"] = bank.course_id;
  j["lectures"] = nlohmann::ordered_json::array();
  for (const auto& lec : bank.lectures) {
    nlohmann::ordered_json jl;
    jl["lecture_id"] = lec.lecture_id;
    jl["ordinal"] = lec.ordinal;
    jl["items"] = nlohmann::ordered_json::array();
    for (const auto& it : lec.items)
      jl["items"].push_back({{"item_id", it.item_id}, {"rank", it.rank}});
    j["lectures"].push_back(std::move(jl));
  }
  return j.dump(2) + "\n";
}

ItemBank load_item_bank(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ItemBank bank;
  bank.course_id = j.at("course").get<std::string>();
  for (const auto& jl : j.at("lectures")) {
    Lecture lec;
    lec.lecture_id = jl.at("lecture_id").get<std::string>();
    lec.ordinal = jl.at("ordinal").get<int>();
    for (const auto& ji : jl.at("items")) {
      Item it;
      it.item_id = ji.at("item_id").get<std::string>();
      it.rank = ji.at("rank").get<int>();
      it.lecture_id = lec.lecture_id;
      lec.items.push_back(std::move(it));
    }
    std::sort(lec.items.begin(), lec.items.end(),
              [](const Item& a, const Item& b) { return a.rank < b.rank; });
    // ranks must be a permutation of 1..m
    for (int r = 1; r <= lec.size(); ++r) {
      if (lec.items[static_cast<size_t>(r - 1)].rank != r)
        throw std::runtime_error("lecture " + lec.lecture_id +
                                 ": ranks are not a permutation of 1..m");
    }
    bank.lectures.push_back(std::move(lec));
  }
  for (size_t k = 0; k < bank.lectures.size(); ++k) {
    if (bank.lectures[k].ordinal != static_cast<int>(k + 1))
      throw std::runtime_error("lecture ordinals are not contiguous from 1");
  }
  if (bank.lectures.empty()) throw std::runtime_error("item bank has no lectures");
  return bank;
}

std::vector<StudentAggregates> student_aggregates(const std::vector<AnswerEvent>& events,
                                                  const std::map<std::string, ExamGrades>& exams) {
  struct LectureStats {
    double g1 = 0, T1 = 0;
    std::optional<double> g5, T5;
    double gn = 0, Tn = 0;
    int max_seq = 0;
  };
  // keyed maps make the computation independent of event order
  std::map<std::string, std::map<std::string, LectureStats>> per_student;
  for (const auto& e : events) {
    auto& ls = per_student[e.student_id][e.lecture_id];
    if (e.seq == 1) {
      ls.g1 = e.correct;
      ls.T1 = e.time_min;
    }
    if (e.seq == 5) {
      ls.g5 = e.correct;
      ls.T5 = e.time_min;
    }
    if (e.seq > ls.max_seq) {
      ls.max_seq = e.seq;
      ls.gn = e.correct;
      ls.Tn = e.time_min;
    }
  }

  std::vector<std::string> missing;
  for (const auto& [sid, _] : per_student)
    if (exams.find(sid) == exams.end()) missing.push_back(sid);
  if (!missing.empty()) {
    std::string msg = "students missing exam grades:";
    for (const auto& s : missing) msg += " " + s;
    throw std::runtime_error(msg);
  }

  std::vector<StudentAggregates> out;
  out.reserve(per_student.size());
  for (const auto& [sid, lectures] : per_student) {
    StudentAggregates a;
    a.student_id = sid;
    const auto& ex = exams.at(sid);
    a.status_g = ex.status_g;
    a.final_g = ex.final_g;
    double sum_g1 = 0, sum_T1 = 0, sum_gn = 0, sum_Tn = 0, sum_att = 0;
    double sum_g5 = 0, sum_T5 = 0;
    int n5 = 0;
    for (const auto& [lid, ls] : lectures) {
      sum_g1 += ls.g1;
      sum_T1 += ls.T1;
      sum_gn += ls.gn;
      sum_Tn += ls.Tn;
      sum_att += ls.max_seq;
      if (ls.g5) {
        sum_g5 += *ls.g5;
        sum_T5 += *ls.T5;
        ++n5;
      }
    }
    const double nl = static_cast<double>(lectures.size());
    a.g1 = sum_g1 / nl;
    a.T1 = sum_T1 / nl;
    a.gn = sum_gn / nl;
    a.Tn = sum_Tn / nl;
    a.twnattl = sum_att / nl;
    if (n5 > 0) {
      a.g5 = sum_g5 / n5;
      a.T5 = sum_T5 / n5;
    }
    a.tn_gt_t1 = a.Tn > a.T1;
    out.push_back(std::move(a));
  }
  return out;
}

std::string serialize_aggregates(const std::vector<StudentAggregates>& aggs) {
  std::string out = "student_id,status_g,final_g,g1,g5,gn,T1,T5,Tn,tn_gt_t1,twnattl\n";
  for (const auto& a : aggs) {
    out += a.student_id;
    out += ',';
    out += csv::format_double(a.status_g);
    out += ',';
    out += csv::format_double(a.final_g);
    out += ',';
    out += csv::format_double(a.g1);
    out += ',';
    out += a.g5 ? csv::format_double(*a.g5) : "";
    out += ',';
    out += csv::format_double(a.gn);
    out += ',';
    out += csv::format_double(a.T1);
    out += ',';
    out += a.T5 ? csv::format_double(*a.T5) : "";
    out += ',';
    out += csv::format_double(a.Tn);
    out += ',';
    out += a.tn_gt_t1 ? "1" : "0";
    out += ',';
    out += csv::format_double(a.twnattl);
    out += '\n';
  }
  return out;
}

std::vector<StudentAggregates> load_aggregates(const std::string& text) {
  csv::Table t = csv::parse(text, kAggHeader);
  std::vector<StudentAggregates> out;
  out.reserve(t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const size_t line = i + 2;
    StudentAggregates a;
    a.student_id = r[0];
    a.status_g = parse_num(r[1], line, "status_g");
    a.final_g = parse_num(r[2], line, "final_g");
    a.g1 = parse_num(r[3], line, "g1");
    if (!r[4].empty()) a.g5 = parse_num(r[4], line, "g5");
    a.gn = parse_num(r[5], line, "gn");
    a.T1 = parse_num(r[6], line, "T1");
    if (!r[7].empty()) a.T5 = parse_num(r[7], line, "T5");
    a.Tn = parse_num(r[8], line, "Tn");
    long long flag = parse_integer(r[9], line, "tn_gt_t1");
    if (flag != 0 && flag != 1) row_error(line, "tn_gt_t1", "must be 0 or 1");
    a.tn_gt_t1 = flag == 1;
    a.twnattl = parse_num(r[10], line, "twnattl");
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace drillsim
