#pragma once

namespace drillsim {

// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
// Continued-fraction evaluation (modified Lentz), switching tails at the
// usual pivot for fast convergence.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value for a t statistic with df degrees of freedom:
// p = I_{df/(df+t^2)}(df/2, 1/2). Returns 1 at t = 0.
double t_two_sided_p(double t, double df);

// Standard normal CDF via erfc.
double normal_cdf(double z);

}  // namespace drillsim
