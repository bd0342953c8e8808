#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "drillsim/itembank.hpp"
#include "drillsim/rng.hpp"

namespace drillsim {

struct AllocationParams {
  double k = 4.0;       // concentration: how sharply the pmf tracks grade
  double p_hist = 0.1;  // chance of revisiting an earlier lecture

  void validate() const;
};

struct DiscreteDistribution {
  std::vector<double> probabilities;  // index r-1 holds rank r

  int size() const { return static_cast<int>(probabilities.size()); }
  std::vector<double> cdf() const;
};

struct ItemChoice {
  int lecture_ordinal = 1;
  std::string item_id;
  int rank = 1;
  int lecture_items = 1;  // m of the lecture the item came from
};

// Probability of rank r proportional to the Beta(1 + k*g, 1 + k*(1-g))
// density at the midpoint (r - 0.5) / m. Low grades favor easy ranks,
// high grades hard ranks; k = 0 is uniform.
DiscreteDistribution iaa_pmf(double grade, int m, const AllocationParams& params);

// Memoizes pmf CDFs by (grade, m); grades repeat heavily under windowed
// grading so simulation sessions hit this cache almost every answer.
class PmfCache {
 public:
  explicit PmfCache(const AllocationParams& params) : params_(params) {}
  const std::vector<double>& cdf(double grade, int m);

 private:
  AllocationParams params_;
  std::unordered_map<std::uint64_t, std::vector<double>> cache_;
};

// Draws the next item: from the current lecture with probability 1 - p_hist,
// otherwise from a uniformly chosen earlier lecture (disabled at lecture 1).
// Either way the rank is drawn from iaa_pmf at the current grade.
ItemChoice next_item(double grade, int current_lecture, const ItemBank& bank,
                     const AllocationParams& params, Rng& rng, PmfCache* cache = nullptr);

}  // namespace drillsim
