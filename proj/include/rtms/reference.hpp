#pragma once

// Published summary statistics of the four-condition debugging study and
// checks that reproduce the reported tests from them.

#include <string>
#include <vector>

#include "rtms/stats.hpp"

namespace rtms::stats::reference {

inline constexpr std::size_t kGroupSize = 30;
inline constexpr double kRounding = 0.005;

enum class Measure { Performance, Expertise, Time };

std::string to_string(Measure m);

struct PublishedGroup {
  const char* condition;
  double perf_mean, perf_sd;
  double exp_mean, exp_sd;
  double time_mean, time_sd;
};

/// Condition descriptives, n = 30 each.
const std::vector<PublishedGroup>& descriptives();

std::vector<GroupSummary> summaries(Measure m);

struct PublishedOmnibus {
  Measure measure;
  double F;
  bool significant;
};

const std::vector<PublishedOmnibus>& omnibus();

struct PublishedPair {
  Measure measure;
  const char* a;
  const char* b;
  double F;
  double cd;
};

/// Pairwise cells for time and performance; CD as printed.
const std::vector<PublishedPair>& pairwise_cells();

struct PublishedCorr {
  const char* condition;  // "all" for the pooled sample
  const char* measure;
  double r;
  std::size_t n;
  bool significant;
};

const std::vector<PublishedCorr>& correlations();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool overlaps(double centre, double half_width) const { return centre + half_width >= lo && centre - half_width <= hi; }
};

struct CellCheck {
  PublishedPair cell;
  PairwiseResult central;  // from the printed descriptives
  Interval F;              // over all rounding corners of the descriptives
  Interval d_from_t;
  bool f_ok = false;
  bool d_ok = false;
  bool excluded = false;
  bool reproduces() const { return f_ok && d_ok; }
};

struct PairwiseReproduction {
  std::vector<CellCheck> cells;
  /// One line per cell that does not reproduce, excluded cells included.
  std::vector<std::string> discrepancies;
};

/// Pairwise F and t-based effect size intervals over every +/-kRounding corner
/// of both groups' mean and SD; a printed value reproduces when its own
/// rounding interval meets the computed one.
PairwiseReproduction reproduce_pairwise();

/// The performance control-vs-cognitive cell is inconsistent with the
/// descriptives and is excluded from reproduction.
bool is_excluded(const PublishedPair& p);

/// F interval over the rounding corners of all group means and SDs.
Interval omnibus_interval(Measure m);

}  // namespace rtms::stats::reference
