#include "rtms/calibration.hpp"

#include <charconv>
#include <cmath>

#include "rtms/error.hpp"
#include "rtms/toml_lite.hpp"

namespace rtms {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  // Keep floats recognisable as floats when read back.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

double covered_duration_s(const IndexSeries& series, double window_s) {
  if (series.empty()) return 0.0;
  return static_cast<double>(series.back().t - series.front().t) / 1000.0 + window_s;
}

BaselineProfile compute_baseline(const IndexSeries& series, IndexSource signal, const CalibrationConfig& cfg) {
  if (series.empty()) throw InsufficientBaselineError("baseline series is empty");
  const double duration = covered_duration_s(series, cfg.window_s);
  if (duration < cfg.floor_s) {
    throw InsufficientBaselineError("baseline covers " + fmt(duration) + " s, below the " + fmt(cfg.floor_s) +
                                    " s floor");
  }
  if (series.size() < 2) throw InsufficientBaselineError("baseline needs at least 2 index windows");

  double sum = 0.0;
  for (const auto& p : series) sum += p.value;
  const auto n = static_cast<double>(series.size());
  const double mu = sum / n;
  double ss = 0.0;
  for (const auto& p : series) ss += (p.value - mu) * (p.value - mu);
  const double sigma = std::sqrt(ss / (n - 1.0));
  if (sigma < cfg.min_sigma) {
    throw DegenerateBaselineError(to_string(signal) + " baseline has zero variance (flat index during rest)");
  }

  BaselineProfile p;
  p.signal = signal;
  p.mu = mu;
  p.sigma = sigma;
  p.k = cfg.k;
  p.theta = mu + cfg.k * sigma;
  p.duration_s = duration;
  p.n_windows = series.size();
  return p;
}

RoslReport validate_rosl(const IndexSeries& series, const CalibrationConfig& cfg) {
  RoslReport r;
  r.n_windows = series.size();
  r.duration_s = covered_duration_s(series, cfg.window_s);
  if (!series.empty()) {
    double cov = 0.0;
    for (const auto& p : series) cov += p.coverage;
    r.coverage = cov / static_cast<double>(series.size());
  }
  r.meets_recommended = r.duration_s >= cfg.recommended_s;
  if (series.empty()) {
    r.reason = "no index windows";
  } else if (r.duration_s < cfg.floor_s) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, cfg.floor_s);
    r.reason = "below " + std::string(buf, end) + " s floor";
  } else if (r.coverage < cfg.min_coverage) {
    r.reason = "coverage";
  }
  r.pass = r.reason.empty();
  return r;
}

void write_profile(std::ostream& out, const BaselineProfile& p) {
  out << "signal = " << toml_lite::quote(to_string(p.signal)) << '\n'
      << "mu = " << fmt(p.mu) << '\n'
      << "sigma = " << fmt(p.sigma) << '\n'
      << "theta = " << fmt(p.theta) << '\n'
      << "k = " << fmt(p.k) << '\n'
      << "duration_s = " << fmt(p.duration_s) << '\n'
      << "n_windows = " << p.n_windows << '\n';
  if (p.pupil_mean_mm) out << "pupil_mean_mm = " << fmt(*p.pupil_mean_mm) << '\n';
  if (p.pupil_sd_mm) out << "pupil_sd_mm = " << fmt(*p.pupil_sd_mm) << '\n';
}

BaselineProfile read_profile(std::istream& in) {
  const auto doc = toml_lite::parse(in);
  const auto& t = doc.root;
  const auto need = [&](const char* key) -> const toml_lite::Value& {
    const auto* v = t.find(key);
    if (!v) throw LoadError(std::string("baseline profile missing '") + key + "'");
    return *v;
  };
  BaselineProfile p;
  const auto& sig = need("signal").as_string();
  if (sig == "cognitive") {
    p.signal = IndexSource::Cognitive;
  } else if (sig == "stress") {
    p.signal = IndexSource::Stress;
  } else {
    throw LoadError("baseline profile has unknown signal '" + sig + "'");
  }
  p.mu = need("mu").as_double();
  p.sigma = need("sigma").as_double();
  p.theta = need("theta").as_double();
  p.k = need("k").as_double();
  p.duration_s = need("duration_s").as_double();
  const auto n = need("n_windows").as_int();
  if (n < 1) throw LoadError("baseline profile n_windows must be >= 1");
  p.n_windows = static_cast<std::size_t>(n);
  if (p.sigma < 0.0) throw LoadError("baseline profile sigma must be >= 0");
  if (p.theta != p.mu + p.k * p.sigma) throw LoadError("baseline profile theta != mu + k*sigma");
  if (const auto* v = t.find("pupil_mean_mm")) p.pupil_mean_mm = v->as_double();
  if (const auto* v = t.find("pupil_sd_mm")) p.pupil_sd_mm = v->as_double();
  return p;
}

}  // namespace rtms
