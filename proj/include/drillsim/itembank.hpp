#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drillsim {

struct Item {
  std::string item_id;
  std::string lecture_id;
  int rank = 1;  // 1 = easiest
};

struct Lecture {
  std::string lecture_id;
  int ordinal = 1;  // 1-based position within course
  std::vector<Item> items;  // sorted by rank, ranks 1..m

  int size() const { return static_cast<int>(items.size()); }
};

struct ItemBank {
  std::string course_id;
  std::vector<Lecture> lectures;  // ordinals 1..L

  int lecture_count() const { return static_cast<int>(lectures.size()); }
  const Lecture& lecture(int ordinal) const;  // 1-based
};

struct AnswerEvent {
  std::string student_id;
  std::string lecture_id;
  std::string item_id;
  int seq = 1;            // 1-based within (student, lecture)
  double time_min = 0.0;  // strictly positive
  int correct = 0;        // 0 or 1
  double grade_after = 0.0;

  bool operator==(const AnswerEvent&) const = default;
};

struct ExamGrades {
  double status_g = 0.0;  // 0-100
  double final_g = 0.0;   // 0-100
};

struct StudentAggregates {
  std::string student_id;
  double status_g = 0.0;
  double final_g = 0.0;
  double g1 = 0.0, gn = 0.0;
  double T1 = 0.0, Tn = 0.0;
  std::optional<double> g5, T5;  // absent if no lecture has >= 5 answers
  bool tn_gt_t1 = false;         // strict Tn > T1
  double twnattl = 0.0;          // mean items requested per attempted lecture
};

// Answer-log CSV: header student_id,lecture_id,item_id,seq,time_min,correct,grade_after.
// Malformed rows and invariant violations raise errors naming line and field;
// seq contiguity is checked per (student, lecture) pair after parsing.
std::vector<AnswerEvent> load_answer_log(const std::string& text);
std::string serialize_answer_log(const std::vector<AnswerEvent>& events);

// Exam CSV: header student_id,status_g,final_g, grades on 0-100.
std::map<std::string, ExamGrades> load_exam_table(const std::string& text);
std::string serialize_exam_table(const std::map<std::string, ExamGrades>& exams);

// One course of lectures sized by `lecture_sizes`; lecture k gets ranks 1..sizes[k].
ItemBank build_item_bank(const std::vector<int>& lecture_sizes,
                         const std::string& course_id = "course");

std::string serialize_item_bank(const ItemBank& bank);
ItemBank load_item_bank(const std::string& text);

// Per-student derived features. Every student seen in `events` must have exam
// grades; the error lists all missing ids.
std::vector<StudentAggregates> student_aggregates(const std::vector<AnswerEvent>& events,
                                                  const std::map<std::string, ExamGrades>& exams);

std::string serialize_aggregates(const std::vector<StudentAggregates>& aggs);
std::vector<StudentAggregates> load_aggregates(const std::string& text);

}  // namespace drillsim
