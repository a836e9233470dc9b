#include "rtms/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtms/error.hpp"

namespace rtms {

namespace {

WaveletFilter make_sym8() {
  WaveletFilter w;
  w.lo = {-0.0033824159510061256, -0.0005421323317911481, 0.03169508781149298,  0.007607487324917605,
          -0.1432942383508097,    -0.061273359067658524,  0.4813596512583722,   0.7771857517005235,
          0.3644418948353314,     -0.05194583810770904,   -0.027219029917056003, 0.049137179673607506,
          0.003808752013890615,   -0.01495225833704823,   -0.0003029205147213668, 0.0018899503327594609};
  // Quadrature mirror: hi[k] = (-1)^(k+1) lo[L-1-k].
  const std::size_t n = w.lo.size();
  w.hi.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = w.lo[n - 1 - k];
    w.hi[k] = (k % 2 == 0) ? -v : v;
  }
  return w;
}

// Half-sample symmetric reflection: x[-1] = x[0], x[n] = x[n-1].
std::ptrdiff_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
  while (i < 0 || i >= n) i = (i < 0) ? -i - 1 : 2 * n - 1 - i;
  return i;
}

}  // namespace

const WaveletFilter& sym8() {
  static const WaveletFilter w = make_sym8();
  return w;
}

void dwt_step(std::span<const double> x, const WaveletFilter& w, std::vector<double>& approx,
              std::vector<double>& detail) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto len = static_cast<std::ptrdiff_t>(w.length());
  const auto out_n = static_cast<std::size_t>((n + len - 1) / 2);
  approx.assign(out_n, 0.0);
  detail.assign(out_n, 0.0);
  for (std::size_t o = 0; o < out_n; ++o) {
    const auto centre = static_cast<std::ptrdiff_t>(2 * o + 1);
    double a = 0.0;
    double d = 0.0;
    for (std::ptrdiff_t j = 0; j < len; ++j) {
      const std::ptrdiff_t idx = centre - j;
      const double v = (idx >= 0 && idx < n) ? x[static_cast<std::size_t>(idx)]
                                             : x[static_cast<std::size_t>(reflect(idx, n))];
      a += w.lo[static_cast<std::size_t>(j)] * v;
      d += w.hi[static_cast<std::size_t>(j)] * v;
    }
    approx[o] = a;
    detail[o] = d;
  }
}

double universal_threshold(std::span<const double> coeffs) {
  if (coeffs.empty()) return 0.0;
  std::vector<double> mag(coeffs.size());
  std::transform(coeffs.begin(), coeffs.end(), mag.begin(), [](double c) { return std::abs(c); });
  const std::size_t n = mag.size();
  const std::size_t mid = n / 2;
  std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(mid), mag.end());
  double median = mag[mid];
  if (n % 2 == 0) {
    const double lower = *std::max_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  const double sigma = median / 0.6745;
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

WaveletDetail dwt_detail(std::span<const double> x, int level, const WaveletFilter& w) {
  if (level < 1) throw ConfigError("wavelet level must be >= 1");
  const std::size_t need = w.length() << level;
  if (x.size() < need) {
    throw InsufficientDataError("wavelet window has " + std::to_string(x.size()) + " samples, level " +
                                std::to_string(level) + " needs " + std::to_string(need));
  }
  std::vector<double> current(x.begin(), x.end());
  std::vector<double> approx;
  std::vector<double> detail;
  for (int l = 1; l <= level; ++l) {
    dwt_step(current, w, approx, detail);
    current.swap(approx);
  }
  WaveletDetail out;
  out.level = level;
  out.lambda = universal_threshold(detail);
  out.coeffs = std::move(detail);
  return out;
}

std::size_t count_modulus_maxima(const WaveletDetail& detail, double floor) {
  const auto& c = detail.coeffs;
  if (c.size() < 3) return 0;
  std::size_t count = 0;
  for (std::size_t k = 1; k + 1 < c.size(); ++k) {
    const double m = std::abs(c[k]);
    if (m > std::abs(c[k - 1]) && m >= std::abs(c[k + 1]) && m >= detail.lambda && m > floor) ++count;
  }
  return count;
}

}  // namespace rtms
