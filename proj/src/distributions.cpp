#include "rtms/distributions.hpp"

#include <cmath>
#include <limits>

#include "rtms/error.hpp"

namespace rtms::dist {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw StatsError("incomplete beta continued fraction did not converge");
}

template <class Fn>
double bisect_decreasing(Fn&& fn, double target, double lo, double hi) {
  while (fn(hi) > target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (fn(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double beta_inc(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw StatsError("beta_inc requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw StatsError("beta_inc requires x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw StatsError("F distribution requires positive degrees of freedom");
  if (std::isinf(f)) return 0.0;
  if (!(f > 0.0)) return 1.0;
  return beta_inc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw StatsError("t distribution requires positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return beta_inc(df / 2.0, 0.5, df / (df + t * t));
}

double f_critical(double alpha, double d1, double d2) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError("alpha must be in (0, 1)");
  return bisect_decreasing([&](double f) { return f_sf(f, d1, d2); }, alpha, 0.0, 10.0);
}

double t_critical(double alpha, double df) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError("alpha must be in (0, 1)");
  return bisect_decreasing([&](double t) { return t_two_sided_p(t, df); }, alpha, 0.0, 10.0);
}

}  // namespace rtms::dist
