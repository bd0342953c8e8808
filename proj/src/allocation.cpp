#include "drillsim/allocation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace drillsim {

void AllocationParams::validate() const {
  if (!(k >= 0)) throw std::invalid_argument("allocation: k must be >= 0");
  if (!(p_hist >= 0 && p_hist <= 1))
    throw std::invalid_argument("allocation: p_hist must be in [0,1]");
}

std::vector<double> DiscreteDistribution::cdf() const {
  std::vector<double> c(probabilities.size());
  double acc = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    c[i] = acc;
  }
  if (!c.empty()) c.back() = 1.0;  // guard the last bin against rounding
  return c;
}

DiscreteDistribution iaa_pmf(double grade, int m, const AllocationParams& params) {
  params.validate();
  if (!(grade >= 0.0 && grade <= 1.0))
    throw std::invalid_argument("iaa_pmf: grade must be in [0,1]");
  if (m < 1) throw std::invalid_argument("iaa_pmf: m must be >= 1");

  // Work with log-densities so large k cannot underflow the easy ranks.
  const double am1 = params.k * grade;          // alpha - 1
  const double bm1 = params.k * (1.0 - grade);  // beta - 1
  std::vector<double> logw(static_cast<size_t>(m));
  double maxlog = -std::numeric_limits<double>::infinity();
  for (int r = 1; r <= m; ++r) {
    const double x = (r - 0.5) / m;
    const double lw = am1 * std::log(x) + bm1 * std::log1p(-x);
    logw[static_cast<size_t>(r - 1)] = lw;
    maxlog = std::max(maxlog, lw);
  }
  DiscreteDistribution dist;
  dist.probabilities.resize(static_cast<size_t>(m));
  double sum = 0.0;
  for (int r = 0; r < m; ++r) {
    const double w = std::exp(logw[static_cast<size_t>(r)] - maxlog);
    dist.probabilities[static_cast<size_t>(r)] = w;
    sum += w;
  }
  for (auto& p : dist.probabilities) p /= sum;
  return dist;
}

namespace {

std::uint64_t cache_key(double grade, int m) {
  return std::bit_cast<std::uint64_t>(grade) ^
         (static_cast<std::uint64_t>(m) * 0x9e3779b97f4a7c15ULL);
}

int draw_rank(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform01();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<int>(it - cdf.begin()) + 1;
}

}  // namespace

const std::vector<double>& PmfCache::cdf(double grade, int m) {
  const std::uint64_t key = cache_key(grade, m);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto c = iaa_pmf(grade, m, params_).cdf();
  return cache_.emplace(key, std::move(c)).first->second;
}

ItemChoice next_item(double grade, int current_lecture, const ItemBank& bank,
                     const AllocationParams& params, Rng& rng, PmfCache* cache) {
  params.validate();
  if (current_lecture < 1 || current_lecture > bank.lecture_count())
    throw std::invalid_argument("next_item: current_lecture out of range");

  int target = current_lecture;
  const bool revisit = current_lecture > 1 && rng.bernoulli(params.p_hist);
  if (revisit)
    target = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(current_lecture - 1)));

  const Lecture& lec = bank.lecture(target);
  int rank;
  if (cache) {
    rank = draw_rank(cache->cdf(grade, lec.size()), rng);
  } else {
    rank = draw_rank(iaa_pmf(grade, lec.size(), params).cdf(), rng);
  }
  ItemChoice choice;
  choice.lecture_ordinal = target;
  choice.rank = rank;
  choice.lecture_items = lec.size();
  choice.item_id = lec.items[static_cast<size_t>(rank - 1)].item_id;
  return choice;
}

}  // namespace drillsim
