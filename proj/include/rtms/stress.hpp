#pragma once

// Stress index: max(0, -beta) where beta is the least-squares slope of heart
// rate (bpm) against time (s) over a sliding window.

#include <cstddef>
#include <vector>

#include "rtms/index_point.hpp"
#include "rtms/signals.hpp"

namespace rtms {

struct HrPoint {
  TimeMs t = 0;
  double bpm = 0.0;

  friend bool operator==(const HrPoint&, const HrPoint&) = default;
};

struct StressWindow {
  TimeMs t_end = 0;
  double beta = 0.0;  // bpm/s
  std::size_t n = 0;
};

struct StressConfig {
  double window_s = 30.0;
  double hop_s = 5.0;
  std::size_t min_beats = 5;
};

struct HrConversion {
  std::vector<HrPoint> points;
  std::size_t skipped = 0;       // out-of-range samples
  bool rr_ignored = false;       // RR present but HR won
};

/// RR intervals (ms) to instantaneous heart rate; out-of-range intervals are
/// skipped and counted.
HrConversion rr_to_hr(const std::vector<BeatSample>& beats);

/// Heart-rate series from whatever cardiac streams are present. When both HR
/// and RR samples exist, HR wins and RR is ignored.
HrConversion heart_rate_from(const std::vector<BeatSample>& beats);

/// OLS slope of bpm on time in seconds. Needs two distinct timestamps.
StressWindow hr_slope(const std::vector<HrPoint>& points);

/// Parallel (OpenMP) windowed stress index. Windows are (t_end - window, t_end].
IndexSeries stress_index_series(const std::vector<HrPoint>& hr, const StressConfig& cfg = {});

/// Single-threaded reference for stress_index_series. Output is bit-identical.
IndexSeries stress_index_series_serial(const std::vector<HrPoint>& hr, const StressConfig& cfg = {});

}  // namespace rtms
