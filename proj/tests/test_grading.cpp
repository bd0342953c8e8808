#include <doctest.h>

#include <stdexcept>

#include "drillsim/grading.hpp"
#include "drillsim/rng.hpp"

using namespace drillsim;

TEST_CASE("window_size clamp table") {
  CHECK(window_size(0) == 8);
  CHECK(window_size(8) == 8);
  CHECK(window_size(16) == 8);
  CHECK(window_size(17) == 8);  // floor(17/2) = 8
  CHECK(window_size(18) == 9);
  CHECK(window_size(40) == 20);
  CHECK(window_size(60) == 30);
  CHECK(window_size(100) == 30);
}

TEST_CASE("last8 basics") {
  CHECK(grade({1, 1, 1, 1, 1, 1, 1, 1}, GradingScheme::Last8) == 1.0);
  CHECK(grade({1, 1, 1}, GradingScheme::Last8) == 0.375);  // 3/8, zero padded
  CHECK(grade({}, GradingScheme::Last8) == 0.0);
  // 12 answers ending with a single miss in the window: 7 of last 8
  CHECK(grade({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0}, GradingScheme::Last8) == 0.875);
}

TEST_CASE("the eighth-answer trap") {
  // 7 correct then 1 incorrect: 0.875, and one more correct answer cannot
  // raise it; only a fresh run of 8 correct answers reaches 1.
  std::vector<int> h{1, 1, 1, 1, 1, 1, 1, 0};
  CHECK(grade(h, GradingScheme::Last8) == 0.875);
  h.push_back(1);
  CHECK(grade(h, GradingScheme::Last8) == 0.875);
  for (int i = 0; i < 6; ++i) {
    h.push_back(1);
    CHECK(grade(h, GradingScheme::Last8) < 1.0);
  }
  h.push_back(1);  // completes 8 consecutive correct
  CHECK(grade(h, GradingScheme::Last8) == 1.0);
}

TEST_CASE("window scheme follows the n_g window") {
  // 20 answers: window is 10, the last 10 are 6 ones
  std::vector<int> h;
  for (int i = 0; i < 10; ++i) h.push_back(0);
  for (int i = 0; i < 4; ++i) h.push_back(0);
  for (int i = 0; i < 6; ++i) h.push_back(1);
  CHECK(grade(h, GradingScheme::WindowNg) == 0.6);
  // short histories are zero padded exactly like last8
  CHECK(grade({1, 1, 1}, GradingScheme::WindowNg) == 0.375);
}

TEST_CASE("tapered gives recency weight") {
  // all-correct histories of length >= window grade exactly 1
  std::vector<int> all(40, 1);
  CHECK(grade(all, GradingScheme::WindowNgTapered) == 1.0);
  std::vector<int> none(40, 0);
  CHECK(grade(none, GradingScheme::WindowNgTapered) == 0.0);
  // a fresh miss hurts more than an old one
  std::vector<int> recent_miss(20, 1), old_miss(20, 1);
  recent_miss.back() = 0;
  old_miss[11] = 0;  // oldest in-window slot (window is 10)
  CHECK(grade(recent_miss, GradingScheme::WindowNgTapered) <
        grade(old_miss, GradingScheme::WindowNgTapered));
}

TEST_CASE("tapered with equal weights equals the plain window") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> h;
    const int n = static_cast<int>(rng.below(70));
    for (int i = 0; i < n; ++i) h.push_back(rng.bernoulli(0.6) ? 1 : 0);
    const int ng = window_size(n);
    const double flat =
        windowed_grade(h, ng, std::vector<double>(static_cast<size_t>(ng), 1.0));
    CHECK(flat == grade(h, GradingScheme::WindowNg));
  }
}

TEST_CASE("all schemes stay in range and respect monotonicity") {
  Rng rng(37);
  const GradingScheme schemes[] = {GradingScheme::Last8, GradingScheme::WindowNg,
                                   GradingScheme::WindowNgTapered};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> h;
    const int n = 1 + static_cast<int>(rng.below(60));
    for (int i = 0; i < n; ++i) h.push_back(rng.bernoulli(0.5) ? 1 : 0);
    for (auto scheme : schemes) {
      const double g = grade(h, scheme);
      CHECK(g >= 0.0);
      CHECK(g <= 1.0);
      // flipping any 0 to 1 never lowers the grade
      const size_t flip = rng.below(h.size());
      if (h[flip] == 0) {
        auto h2 = h;
        h2[flip] = 1;
        CHECK(grade(h2, scheme) >= g);
      }
    }
  }
}

TEST_CASE("non-binary answers are rejected") {
  CHECK_THROWS_AS(grade({1, 2, 0}, GradingScheme::Last8), std::invalid_argument);
  CHECK_THROWS_AS(grade({-1}, GradingScheme::WindowNg), std::invalid_argument);
}

TEST_CASE("scheme names round-trip") {
  for (auto s : {GradingScheme::Last8, GradingScheme::WindowNg, GradingScheme::WindowNgTapered})
    CHECK(parse_grading_scheme(grading_scheme_name(s)) == s);
  CHECK_THROWS_AS(parse_grading_scheme("median"), std::invalid_argument);
}
