#include "rtms/ipa.hpp"

#include <algorithm>
#include <cmath>

#include "rtms/error.hpp"

namespace rtms {

namespace {

struct WindowGrid {
  std::size_t win = 0;
  std::size_t hop = 0;
  std::size_t count = 0;
};

WindowGrid grid_for(const CleanSignal& signal, const IpaConfig& cfg) {
  if (!(cfg.window_s > 0.0) || !(cfg.hop_s > 0.0) || cfg.hop_s > cfg.window_s) {
    throw ConfigError("IPA window/hop must satisfy 0 < hop <= window");
  }
  WindowGrid g;
  g.win = static_cast<std::size_t>(std::llround(cfg.window_s * signal.fs));
  g.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.hop_s * signal.fs)));
  if (g.win == 0 || signal.size() < g.win) return g;
  g.count = (signal.size() - g.win) / g.hop + 1;
  return g;
}

double ipa_of_run(std::span<const double> run, double fs, const IpaConfig& cfg) {
  double mean = 0.0;
  for (double v : run) mean += v;
  mean /= static_cast<double>(run.size());
  std::vector<double> centred(run.size());
  double spread = 0.0;
  for (std::size_t i = 0; i < run.size(); ++i) {
    centred[i] = run[i] - mean;
    spread = std::max(spread, std::abs(centred[i]));
  }
  if (spread == 0.0) return 0.0;
  const auto detail = dwt_detail(centred, cfg.level);
  const auto count = count_modulus_maxima(detail, cfg.floor_rel * spread);
  return static_cast<double>(count) / (static_cast<double>(run.size()) / fs);
}

}  // namespace

double ipa_value(std::span<const double> window, double fs, const IpaConfig& cfg) {
  return ipa_of_run(window, fs, cfg);
}

std::optional<IndexPoint> ipa_window(const CleanSignal& signal, std::size_t begin, std::size_t len,
                                     const IpaConfig& cfg) {
  if (len == 0 || begin + len > signal.size()) return std::nullopt;

  std::size_t usable = 0;
  std::size_t best_start = 0;
  std::size_t best_len = 0;
  std::size_t run_start = begin;
  for (std::size_t i = begin; i < begin + len; ++i) {
    if (signal.mask[i] == SampleMask::Missing) {
      run_start = i + 1;
      continue;
    }
    ++usable;
    if (i + 1 - run_start > best_len) {
      best_len = i + 1 - run_start;
      best_start = run_start;
    }
  }
  const double coverage = static_cast<double>(usable) / static_cast<double>(len);
  if (coverage < cfg.min_coverage) return std::nullopt;
  if (best_len < (sym8().length() << cfg.level)) return std::nullopt;

  IndexPoint p;
  p.t = static_cast<TimeMs>(std::llround(signal.time_at(begin + len)));
  p.coverage = coverage;
  p.value = ipa_of_run(std::span<const double>(signal.values).subspan(best_start, best_len), signal.fs, cfg);
  return p;
}

IndexSeries ipa_series_serial(const CleanSignal& signal, const IpaConfig& cfg) {
  const auto g = grid_for(signal, cfg);
  IndexSeries out;
  for (std::size_t j = 0; j < g.count; ++j) {
    if (auto p = ipa_window(signal, j * g.hop, g.win, cfg)) out.push_back(*p);
  }
  return out;
}

IndexSeries ipa_series(const CleanSignal& signal, const IpaConfig& cfg) {
  const auto g = grid_for(signal, cfg);
  std::vector<std::optional<IndexPoint>> slots(g.count);
  const auto n = static_cast<std::ptrdiff_t>(g.count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    slots[static_cast<std::size_t>(j)] = ipa_window(signal, static_cast<std::size_t>(j) * g.hop, g.win, cfg);
  }
  IndexSeries out;
  out.reserve(g.count);
  for (const auto& s : slots) {
    if (s) out.push_back(*s);
  }
  return out;
}

}  // namespace rtms
