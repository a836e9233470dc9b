#pragma once

// Tail probabilities of the F and Student t distributions via the regularized
// incomplete beta function.

namespace rtms::dist {

/// I_x(a, b) for a, b > 0 and x in [0, 1]; continued fraction (modified Lentz).
double beta_inc(double a, double b, double x);

/// P(F > f) for F ~ F(d1, d2).
double f_sf(double f, double d1, double d2);

/// P(|T| > |t|) for T ~ t(df).
double t_two_sided_p(double t, double df);

/// Upper-tail critical value: f with f_sf(f, d1, d2) = alpha.
double f_critical(double alpha, double d1, double d2);

/// Two-sided critical value: t with t_two_sided_p(t, df) = alpha.
double t_critical(double alpha, double df);

}  // namespace rtms::dist
