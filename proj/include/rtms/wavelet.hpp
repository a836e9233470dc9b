#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rtms {

/// Decomposition filters of an orthogonal wavelet.
struct WaveletFilter {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t length() const noexcept { return lo.size(); }
};

/// 16-tap least-asymmetric Daubechies wavelet (symlet, 8 vanishing moments).
const WaveletFilter& sym8();

struct WaveletDetail {
  int level = 1;
  std::vector<double> coeffs;
  double lambda = 0.0;  // universal threshold
};

/// One analysis step with half-sample symmetric extension. Output length is
/// floor((n + L - 1) / 2) for both bands.
void dwt_step(std::span<const double> x, const WaveletFilter& w, std::vector<double>& approx,
              std::vector<double>& detail);

/// Detail coefficients at `level`, with lambda = sigma * sqrt(2 ln n) and
/// sigma = median(|c|) / 0.6745. Throws InsufficientDataError when
/// x.size() < L * 2^level.
WaveletDetail dwt_detail(std::span<const double> x, int level, const WaveletFilter& w = sym8());

double universal_threshold(std::span<const double> coeffs);

/// Interior k with |c[k]| > |c[k-1]|, |c[k]| >= |c[k+1]|, |c[k]| >= lambda and
/// |c[k]| > floor.
std::size_t count_modulus_maxima(const WaveletDetail& detail, double floor = 0.0);

}  // namespace rtms
