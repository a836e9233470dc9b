#include "rtms/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtms/error.hpp"

namespace rtms {

std::vector<PupilSample> remove_blinks(const std::vector<PupilSample>& samples, double pad_ms,
                                       double floor_mm) {
  std::vector<TimeMs> blink_times;
  for (const auto& s : samples) {
    const auto d = pupil_diameter(s);
    if (!d || *d < floor_mm) blink_times.push_back(s.t);
  }
  std::vector<PupilSample> out = samples;
  if (blink_times.empty()) return out;
  std::sort(blink_times.begin(), blink_times.end());
  for (auto& s : out) {
    if (!s.valid) continue;
    const auto it = std::lower_bound(blink_times.begin(), blink_times.end(), s.t);
    double nearest = std::numeric_limits<double>::infinity();
    if (it != blink_times.end()) nearest = static_cast<double>(*it - s.t);
    if (it != blink_times.begin()) nearest = std::min(nearest, static_cast<double>(s.t - *std::prev(it)));
    if (nearest <= pad_ms) s.valid = false;
  }
  return out;
}

std::vector<PupilSample> clamp_artifacts(const std::vector<PupilSample>& samples, double lo_mm,
                                         double hi_mm, double slew_mm, double slew_window_ms) {
  std::vector<PupilSample> out = samples;
  const PupilSample* prev = nullptr;
  double prev_d = 0.0;
  for (auto& s : out) {
    const auto d = pupil_diameter(s);
    if (!d) continue;
    if (*d < lo_mm || *d > hi_mm) {
      s.valid = false;
      continue;
    }
    if (prev && static_cast<double>(s.t - prev->t) <= slew_window_ms && std::abs(*d - prev_d) > slew_mm) {
      s.valid = false;
      continue;
    }
    prev = &s;
    prev_d = *d;
  }
  return out;
}

CleanSignal resample_uniform(const std::vector<PupilSample>& samples, double fs, double max_gap_ms) {
  if (!(fs > 0.0)) throw ConfigError("resample rate must be positive");

  // Valid samples, plus for each the number of invalid samples seen just before it.
  struct Anchor {
    double t;
    double v;
    bool gap_before;
  };
  std::vector<Anchor> anchors;
  bool pending_gap = false;
  for (const auto& s : samples) {
    const auto d = pupil_diameter(s);
    if (!d) {
      pending_gap = true;
      continue;
    }
    anchors.push_back({static_cast<double>(s.t), *d, pending_gap && !anchors.empty()});
    pending_gap = false;
  }
  if (anchors.size() < 2) throw InsufficientDataError("resampling needs at least 2 valid samples");

  CleanSignal out;
  out.fs = fs;
  out.t0 = anchors.front().t;
  const double step = 1000.0 / fs;
  const double span = anchors.back().t - anchors.front().t;
  const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
  out.values.resize(n);
  out.mask.resize(n);

  std::size_t k = 0;  // anchors[k].t <= g < anchors[k+1].t
  for (std::size_t i = 0; i < n; ++i) {
    const double g = out.t0 + static_cast<double>(i) * step;
    while (k + 2 < anchors.size() && anchors[k + 1].t <= g) ++k;
    const Anchor& a = anchors[k];
    const Anchor& b = anchors[k + 1];
    if (std::abs(g - a.t) < 1e-9 || std::abs(g - b.t) < 1e-9) {
      out.values[i] = std::abs(g - a.t) < 1e-9 ? a.v : b.v;
      out.mask[i] = SampleMask::Measured;
      continue;
    }
    if (b.gap_before && b.t - a.t > max_gap_ms) {
      out.values[i] = std::numeric_limits<double>::quiet_NaN();
      out.mask[i] = SampleMask::Missing;
      continue;
    }
    const double w = (g - a.t) / (b.t - a.t);
    out.values[i] = a.v + w * (b.v - a.v);
    out.mask[i] = b.gap_before ? SampleMask::Interpolated : SampleMask::Measured;
  }
  return out;
}

CleanSignal normalize_to_baseline(const CleanSignal& signal, double base_mean, double base_sd) {
  if (!(base_sd > 0.0)) throw DegenerateBaselineError("baseline SD must be positive");
  CleanSignal out = signal;
  for (auto& v : out.values) v = (v - base_mean) / base_sd;
  return out;
}

CleanSignal clean_pupil(const std::vector<PupilSample>& samples, const PreprocessConfig& cfg) {
  const auto no_blinks = remove_blinks(samples, cfg.blink_pad_ms, cfg.blink_floor_mm);
  const auto clamped =
      clamp_artifacts(no_blinks, cfg.clamp_lo_mm, cfg.clamp_hi_mm, cfg.slew_mm, cfg.slew_window_ms);
  return resample_uniform(clamped, cfg.fs, cfg.max_gap_ms);
}

PupilStats signal_stats(const CleanSignal& signal) {
  PupilStats st;
  double sum = 0.0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    if (signal.mask[i] == SampleMask::Missing) continue;
    sum += signal.values[i];
    ++st.n;
  }
  if (st.n == 0) return st;
  st.mean = sum / static_cast<double>(st.n);
  double ss = 0.0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    if (signal.mask[i] == SampleMask::Missing) continue;
    const double d = signal.values[i] - st.mean;
    ss += d * d;
  }
  st.sd = st.n > 1 ? std::sqrt(ss / static_cast<double>(st.n - 1)) : 0.0;
  return st;
}

}  // namespace rtms
