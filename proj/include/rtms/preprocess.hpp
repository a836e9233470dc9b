#pragma once

#include <cstdint>
#include <vector>

#include "rtms/signals.hpp"

namespace rtms {

enum class SampleMask : std::uint8_t { Measured, Interpolated, Missing };

/// Uniformly sampled pupil signal. Sample i sits at t0 + i * 1000 / fs ms.
/// Missing samples hold NaN.
struct CleanSignal {
  double fs = 60.0;
  double t0 = 0.0;
  std::vector<double> values;
  std::vector<SampleMask> mask;

  std::size_t size() const noexcept { return values.size(); }
  double time_at(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * 1000.0 / fs; }
};

struct PreprocessConfig {
  double blink_pad_ms = 100.0;
  double blink_floor_mm = 1.0;
  double clamp_lo_mm = 1.5;
  double clamp_hi_mm = 9.0;
  double slew_mm = 0.8;
  double slew_window_ms = 20.0;
  double fs = 60.0;
  double max_gap_ms = 500.0;
};

/// Marks blinks (invalid samples or diameters under the blink floor) and every
/// sample within `pad_ms` of one. Values are never modified.
std::vector<PupilSample> remove_blinks(const std::vector<PupilSample>& samples, double pad_ms = 100.0,
                                       double floor_mm = 1.0);

/// Marks out-of-range diameters and physiologically impossible slews (a jump
/// above `slew_mm` within `slew_window_ms` of the previous accepted sample).
std::vector<PupilSample> clamp_artifacts(const std::vector<PupilSample>& samples, double lo_mm = 1.5,
                                         double hi_mm = 9.0, double slew_mm = 0.8,
                                         double slew_window_ms = 20.0);

/// Linear resampling onto a uniform grid starting at the first valid sample.
/// Runs of invalid samples spanning at most `max_gap_ms` are bridged and
/// flagged Interpolated; longer runs become Missing.
CleanSignal resample_uniform(const std::vector<PupilSample>& samples, double fs = 60.0,
                             double max_gap_ms = 500.0);

/// z-scores against a resting baseline. Throws DegenerateBaselineError for base_sd <= 0.
CleanSignal normalize_to_baseline(const CleanSignal& signal, double base_mean, double base_sd);

/// remove_blinks -> clamp_artifacts -> resample_uniform.
CleanSignal clean_pupil(const std::vector<PupilSample>& samples, const PreprocessConfig& cfg = {});

struct PupilStats {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

/// Mean and n-1 SD over the non-missing samples.
PupilStats signal_stats(const CleanSignal& signal);

}  // namespace rtms
