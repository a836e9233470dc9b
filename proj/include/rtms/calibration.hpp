#pragma once

// Resting-state baselines and the per-signal trigger threshold
// theta = mu + k * sigma.

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "rtms/index_point.hpp"

namespace rtms {

struct BaselineProfile {
  IndexSource signal = IndexSource::Cognitive;
  double mu = 0.0;
  double sigma = 0.0;
  double theta = 0.0;
  double k = 2.0;
  double duration_s = 0.0;
  std::size_t n_windows = 0;
  // Resting pupil diameter, kept with the cognitive profile for z-normalising
  // the live pupil signal.
  std::optional<double> pupil_mean_mm;
  std::optional<double> pupil_sd_mm;

  friend bool operator==(const BaselineProfile&, const BaselineProfile&) = default;
};

struct CalibrationConfig {
  double k = 2.0;
  double window_s = 10.0;        // window of the index series being baselined
  double floor_s = 60.0;         // hard minimum
  double recommended_s = 120.0;  // reported, not enforced
  double min_coverage = 0.5;
  double min_sigma = 1e-9;
};

/// Seconds of signal a series spans: (t_last - t_first) + one window.
double covered_duration_s(const IndexSeries& series, double window_s);

/// Sample mean and n-1 SD of the index values. Throws
/// InsufficientBaselineError below the duration floor and
/// DegenerateBaselineError when sigma < min_sigma.
BaselineProfile compute_baseline(const IndexSeries& series, IndexSource signal, const CalibrationConfig& cfg = {});

struct RoslReport {
  double duration_s = 0.0;
  double coverage = 0.0;
  std::size_t n_windows = 0;
  bool pass = false;
  bool meets_recommended = false;
  std::string reason;  // empty on pass
};

RoslReport validate_rosl(const IndexSeries& series, const CalibrationConfig& cfg = {});

/// Flat `key = value` text form.
void write_profile(std::ostream& out, const BaselineProfile& p);
BaselineProfile read_profile(std::istream& in);

}  // namespace rtms
