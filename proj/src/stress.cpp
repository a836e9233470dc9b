#include "rtms/stress.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "rtms/error.hpp"

namespace rtms {

namespace {

double slope_of(std::span<const HrPoint> pts) {
  // Centre on the first timestamp before converting to seconds so large
  // epochs do not cost precision.
  const TimeMs origin = pts.front().t;
  double tm = 0.0;
  double ym = 0.0;
  for (const auto& p : pts) {
    tm += static_cast<double>(p.t - origin) / 1000.0;
    ym += p.bpm;
  }
  const auto n = static_cast<double>(pts.size());
  tm /= n;
  ym /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : pts) {
    const double dt = static_cast<double>(p.t - origin) / 1000.0 - tm;
    sxy += dt * (p.bpm - ym);
    sxx += dt * dt;
  }
  return sxy / sxx;
}

bool has_two_distinct(std::span<const HrPoint> pts) {
  return std::any_of(pts.begin(), pts.end(), [&](const HrPoint& p) { return p.t != pts.front().t; });
}

struct Grid {
  TimeMs first_end = 0;
  TimeMs window = 0;
  TimeMs hop = 0;
  std::size_t count = 0;
};

Grid grid_for(const std::vector<HrPoint>& hr, const StressConfig& cfg) {
  if (!(cfg.window_s > 0.0) || !(cfg.hop_s > 0.0)) throw ConfigError("stress window/hop must be positive");
  Grid g;
  g.window = static_cast<TimeMs>(std::llround(cfg.window_s * 1000.0));
  g.hop = std::max<TimeMs>(1, static_cast<TimeMs>(std::llround(cfg.hop_s * 1000.0)));
  if (hr.empty()) return g;
  g.first_end = hr.front().t + g.window;
  if (g.first_end > hr.back().t) return g;
  g.count = static_cast<std::size_t>((hr.back().t - g.first_end) / g.hop) + 1;
  return g;
}

std::optional<IndexPoint> window_point(std::span<const HrPoint> pts, TimeMs t_end, TimeMs window,
                                       const StressConfig& cfg) {
  if (pts.empty() || pts.size() < cfg.min_beats || !has_two_distinct(pts)) return std::nullopt;
  IndexPoint p;
  p.t = t_end;
  p.value = std::max(0.0, -slope_of(pts));
  const double span = static_cast<double>(pts.back().t - pts.front().t);
  p.coverage = std::min(1.0, span / static_cast<double>(window));
  return p;
}

}  // namespace

HrConversion rr_to_hr(const std::vector<BeatSample>& beats) {
  HrConversion out;
  for (const auto& b : beats) {
    if (b.kind != BeatKind::RR) continue;
    if (!beat_value_in_range(BeatKind::RR, b.value)) {
      ++out.skipped;
      continue;
    }
    out.points.push_back({b.t, 60000.0 / b.value});
  }
  return out;
}

HrConversion heart_rate_from(const std::vector<BeatSample>& beats) {
  const bool any_hr = std::any_of(beats.begin(), beats.end(), [](const BeatSample& b) { return b.kind == BeatKind::HR; });
  const bool any_rr = std::any_of(beats.begin(), beats.end(), [](const BeatSample& b) { return b.kind == BeatKind::RR; });
  if (!any_hr) return rr_to_hr(beats);
  HrConversion out;
  out.rr_ignored = any_rr;
  for (const auto& b : beats) {
    if (b.kind != BeatKind::HR) continue;
    if (!beat_value_in_range(BeatKind::HR, b.value)) {
      ++out.skipped;
      continue;
    }
    out.points.push_back({b.t, b.value});
  }
  return out;
}

StressWindow hr_slope(const std::vector<HrPoint>& points) {
  if (points.size() < 2 || !has_two_distinct(points)) {
    throw InsufficientDataError("heart-rate slope needs at least 2 distinct timestamps");
  }
  StressWindow w;
  w.t_end = points.back().t;
  w.n = points.size();
  w.beta = slope_of(points);
  return w;
}

IndexSeries stress_index_series_serial(const std::vector<HrPoint>& hr, const StressConfig& cfg) {
  const auto g = grid_for(hr, cfg);
  IndexSeries out;
  for (std::size_t j = 0; j < g.count; ++j) {
    const TimeMs t_end = g.first_end + static_cast<TimeMs>(j) * g.hop;
    std::vector<HrPoint> in_window;
    for (const auto& p : hr) {
      if (p.t > t_end - g.window && p.t <= t_end) in_window.push_back(p);
    }
    if (auto p = window_point(in_window, t_end, g.window, cfg)) out.push_back(*p);
  }
  return out;
}

IndexSeries stress_index_series(const std::vector<HrPoint>& hr, const StressConfig& cfg) {
  const auto g = grid_for(hr, cfg);
  std::vector<std::optional<IndexPoint>> slots(g.count);
  const auto n = static_cast<std::ptrdiff_t>(g.count);
  const auto by_time = [](const HrPoint& p, TimeMs t) { return p.t <= t; };
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const TimeMs t_end = g.first_end + static_cast<TimeMs>(j) * g.hop;
    const auto lo = std::lower_bound(hr.begin(), hr.end(), t_end - g.window, by_time);
    const auto hi = std::lower_bound(lo, hr.end(), t_end, by_time);
    slots[static_cast<std::size_t>(j)] =
        window_point(std::span<const HrPoint>(hr.data() + (lo - hr.begin()), static_cast<std::size_t>(hi - lo)), t_end, g.window, cfg);
  }
  IndexSeries out;
  out.reserve(g.count);
  for (const auto& s : slots) {
    if (s) out.push_back(*s);
  }
  return out;
}

}  // namespace rtms
