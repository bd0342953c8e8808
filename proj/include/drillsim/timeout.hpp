#pragma once

#include "drillsim/rng.hpp"

namespace drillsim {

// Grade-dependent minimum engagement time: an inverted bell between b and a,
// dipping to b at grade g_star. Grades here live on the 0-10 scale.
struct TimeoutParams {
  double a = 10.0;     // upper bound, minutes
  double b = 2.0;      // minimum, minutes
  double g_star = 5.0; // grade at which the minimum occurs
  double s = 1.0;      // width, grade units

  void validate() const;
};

enum class TimeoutField { B, GStar };

// a * (1 - (1 - b/a) * exp(-(g - g_star)^2 / (2 s^2)))
double timeout_curve(double g, const TimeoutParams& params);

// Returns `base` with the chosen field replaced by a uniform draw on [lo, hi].
// The interval must keep TimeoutParams valid for every value it contains.
TimeoutParams sample_timeout_params(const TimeoutParams& base, TimeoutField vary, double lo,
                                    double hi, Rng& rng);

// Validates the interval without drawing; used by experiment designs.
void check_timeout_interval(const TimeoutParams& base, TimeoutField vary, double lo, double hi);

}  // namespace drillsim
