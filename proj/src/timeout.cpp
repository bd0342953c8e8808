#include "drillsim/timeout.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drillsim {

void TimeoutParams::validate() const {
  if (!(a > 0)) throw std::invalid_argument("timeout: a must be > 0");
  if (!(b > 0 && b <= a)) throw std::invalid_argument("timeout: need 0 < b <= a");
  if (!(s > 0)) throw std::invalid_argument("timeout: s must be > 0");
  if (g_star < 0 || g_star > 10)
    throw std::invalid_argument("timeout: g_star must be in [0,10]");
}

double timeout_curve(double g, const TimeoutParams& params) {
  params.validate();
  const double d = g - params.g_star;
  // algebraically a * (1 - (1 - b/a) exp(...)); this form hits b exactly at g*
  return params.a -
         (params.a - params.b) * std::exp(-d * d / (2.0 * params.s * params.s));
}

void check_timeout_interval(const TimeoutParams& base, TimeoutField vary, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("timeout interval: need lo <= hi");
  TimeoutParams probe = base;
  for (double v : {lo, hi}) {
    switch (vary) {
      case TimeoutField::B: probe.b = v; break;
      case TimeoutField::GStar: probe.g_star = v; break;
    }
    probe.validate();  // throws if the endpoint breaks the invariants
  }
}

TimeoutParams sample_timeout_params(const TimeoutParams& base, TimeoutField vary, double lo,
                                    double hi, Rng& rng) {
  check_timeout_interval(base, vary, lo, hi);
  TimeoutParams out = base;
  const double v = rng.uniform(lo, hi);
  switch (vary) {
    case TimeoutField::B: out.b = v; break;
    case TimeoutField::GStar: out.g_star = v; break;
  }
  return out;
}

}  // namespace drillsim
