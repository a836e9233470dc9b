#pragma once

#include <string>
#include <vector>

#include "rtms/signals.hpp"

namespace rtms {

enum class IndexSource : std::uint8_t { Cognitive, Stress };

inline std::string to_string(IndexSource s) { return s == IndexSource::Cognitive ? "cognitive" : "stress"; }

/// One windowed index value, stamped at the window end. Hz for IPA, bpm/s for
/// the stress index.
struct IndexPoint {
  TimeMs t = 0;
  double value = 0.0;
  double coverage = 1.0;

  friend bool operator==(const IndexPoint&, const IndexPoint&) = default;
};

using IndexSeries = std::vector<IndexPoint>;

}  // namespace rtms
