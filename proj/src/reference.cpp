#include "rtms/reference.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <limits>

#include "rtms/error.hpp"

namespace rtms::stats::reference {

namespace {

const PublishedGroup& group(const char* condition) {
  for (const auto& g : descriptives()) {
    if (std::strcmp(g.condition, condition) == 0) return g;
  }
  throw StatsError(std::string("unknown condition ") + condition);
}

GroupSummary summary_of(const PublishedGroup& g, Measure m) {
  switch (m) {
    case Measure::Performance: return {g.condition, kGroupSize, g.perf_mean, g.perf_sd};
    case Measure::Expertise: return {g.condition, kGroupSize, g.exp_mean, g.exp_sd};
    case Measure::Time: return {g.condition, kGroupSize, g.time_mean, g.time_sd};
  }
  return {};
}

void widen(Interval& iv, double v, bool first) {
  if (first) {
    iv.lo = iv.hi = v;
  } else {
    iv.lo = std::min(iv.lo, v);
    iv.hi = std::max(iv.hi, v);
  }
}

}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::Performance: return "performance";
    case Measure::Expertise: return "expertise";
    case Measure::Time: return "time";
  }
  return "?";
}

const std::vector<PublishedGroup>& descriptives() {
  static const std::vector<PublishedGroup> rows{
      {"control", 0.90, 0.84, 4.46, 1.63, 284.13, 55.39},
      {"stress", 2.93, 0.82, 4.13, 1.81, 202.07, 39.35},
      {"cognitive", 3.93, 0.78, 4.46, 1.39, 169.32, 51.49},
      {"combined", 4.33, 0.76, 5.00, 1.68, 140.29, 47.73},
  };
  return rows;
}

std::vector<GroupSummary> summaries(Measure m) {
  std::vector<GroupSummary> out;
  for (const auto& g : descriptives()) out.push_back(summary_of(g, m));
  return out;
}

const std::vector<PublishedOmnibus>& omnibus() {
  static const std::vector<PublishedOmnibus> rows{
      {Measure::Performance, 109.98, true},
      {Measure::Time, 48.53, true},
      {Measure::Expertise, 1.47, false},
  };
  return rows;
}

const std::vector<PublishedPair>& pairwise_cells() {
  static const std::vector<PublishedPair> rows{
      {Measure::Time, "control", "stress", 43.74, 1.74},
      {Measure::Time, "control", "cognitive", 69.13, 2.18},
      {Measure::Time, "control", "combined", 116.08, 2.83},
      {Measure::Time, "stress", "cognitive", 7.66, 0.73},
      {Measure::Time, "stress", "combined", 29.92, 1.44},
      {Measure::Time, "cognitive", "combined", 5.12, 0.59},
      {Measure::Performance, "control", "stress", 88.66, 2.47},
      {Measure::Performance, "control", "cognitive", 138.01, 3.09},
      {Measure::Performance, "control", "combined", 277.58, 4.38},
      {Measure::Performance, "stress", "cognitive", 23.05, 1.26},
      {Measure::Performance, "stress", "combined", 48.52, 1.83},
      {Measure::Performance, "cognitive", "combined", 4.69, 0.57},
  };
  return rows;
}

const std::vector<PublishedCorr>& correlations() {
  static const std::vector<PublishedCorr> rows{
      {"control", "performance", 0.48, 30, true},   {"stress", "performance", 0.25, 30, false},
      {"cognitive", "performance", 0.19, 30, false}, {"combined", "performance", 0.18, 30, false},
      {"control", "time", -0.46, 30, true},          {"stress", "time", -0.18, 30, false},
      {"cognitive", "time", -0.10, 30, false},       {"combined", "time", -0.09, 30, false},
      {"all", "performance", 0.23, 120, true},
  };
  return rows;
}

bool is_excluded(const PublishedPair& p) {
  return p.measure == Measure::Performance && std::strcmp(p.a, "control") == 0 && std::strcmp(p.b, "cognitive") == 0;
}

PairwiseReproduction reproduce_pairwise() {
  PairwiseReproduction out;
  for (const auto& cell : pairwise_cells()) {
    const auto a = summary_of(group(cell.a), cell.measure);
    const auto b = summary_of(group(cell.b), cell.measure);
    CellCheck c;
    c.cell = cell;
    c.excluded = is_excluded(cell);
    c.central = pairwise_compare(a, b, 6);
    for (int corner = 0; corner < 16; ++corner) {
      auto ac = a;
      auto bc = b;
      ac.mean += (corner & 1) ? kRounding : -kRounding;
      bc.mean += (corner & 2) ? kRounding : -kRounding;
      ac.sd += (corner & 4) ? kRounding : -kRounding;
      bc.sd += (corner & 8) ? kRounding : -kRounding;
      const auto r = pairwise_compare(ac, bc, 6);
      widen(c.F, r.F, corner == 0);
      widen(c.d_from_t, r.d_from_t, corner == 0);
    }
    c.f_ok = c.F.overlaps(cell.F, kRounding);
    c.d_ok = c.d_from_t.overlaps(cell.cd, kRounding);
    if (!c.reproduces()) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "%s %s vs %s: printed F = %.2f, CD = %.2f; descriptives give F = %.2f in [%.2f, %.2f], "
                    "d = %.2f in [%.2f, %.2f]%s",
                    to_string(cell.measure).c_str(), cell.a, cell.b, cell.F, cell.cd, c.central.F, c.F.lo, c.F.hi,
                    c.central.d_from_t, c.d_from_t.lo, c.d_from_t.hi, c.excluded ? " (excluded)" : "");
      out.discrepancies.emplace_back(buf);
    }
    out.cells.push_back(c);
  }
  return out;
}

Interval omnibus_interval(Measure m) {
  const auto base = summaries(m);
  Interval iv;
  const std::size_t k = base.size();
  const std::size_t corners = std::size_t{1} << (2 * k);
  for (std::size_t corner = 0; corner < corners; ++corner) {
    auto g = base;
    for (std::size_t i = 0; i < k; ++i) {
      g[i].mean += ((corner >> (2 * i)) & 1) ? kRounding : -kRounding;
      g[i].sd += ((corner >> (2 * i + 1)) & 1) ? kRounding : -kRounding;
    }
    widen(iv, anova_from_summary(g).F, corner == 0);
  }
  return iv;
}

}  // namespace rtms::stats::reference
