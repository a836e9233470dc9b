#pragma once

// Index of Pupillary Activity: the rate (Hz) of significant modulus maxima in
// the level-2 wavelet detail of the pupil signal, evaluated on hop windows.

#include <optional>

#include "rtms/index_point.hpp"
#include "rtms/preprocess.hpp"
#include "rtms/wavelet.hpp"

namespace rtms {

struct IpaConfig {
  double window_s = 10.0;
  double hop_s = 1.0;
  int level = 2;
  double min_coverage = 0.5;
  // Maxima must also exceed floor_rel * max|x - mean| of the window, which
  // keeps round-off in flat stretches from being counted.
  double floor_rel = 1e-9;
};

/// IPA over samples [begin, begin + len) of `signal`. Returns nothing when the
/// window's usable fraction is below min_coverage or its longest usable run is
/// too short for the transform.
std::optional<IndexPoint> ipa_window(const CleanSignal& signal, std::size_t begin, std::size_t len,
                                     const IpaConfig& cfg = {});

/// Convenience overload for a bare, fully usable window.
double ipa_value(std::span<const double> window, double fs, const IpaConfig& cfg = {});

/// Hop-window series; windows are evaluated in parallel (OpenMP).
IndexSeries ipa_series(const CleanSignal& signal, const IpaConfig& cfg = {});

/// Single-threaded reference for ipa_series. Output is bit-identical.
IndexSeries ipa_series_serial(const CleanSignal& signal, const IpaConfig& cfg = {});

}  // namespace rtms
