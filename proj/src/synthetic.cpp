#include "rtms/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "rtms/error.hpp"

namespace rtms {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t sample_count(double duration_s, double fs) {
  return static_cast<std::size_t>(std::floor(duration_s * fs + 1e-9)) + 1;
}

TimeMs stamp(std::size_t i, double fs) { return std::llround(static_cast<double>(i) * 1000.0 / fs); }

template <class Episode>
void check_intervals(std::vector<Episode> eps, const char* channel) {
  for (const auto& e : eps) {
    if (!(e.t1 > e.t0) || e.t0 < 0.0) throw SpecError(std::string(channel) + " episode needs 0 <= t0 < t1");
  }
  std::sort(eps.begin(), eps.end(), [](const auto& a, const auto& b) { return a.t0 < b.t0; });
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (eps[i].t0 < eps[i - 1].t1) {
      throw SpecError(std::string(channel) + " episodes overlap at t=" + std::to_string(eps[i].t0) + " s");
    }
  }
}

// Hann-windowed bursts starting at t_begin every period while a whole burst fits before t_end.
void add_bursts(std::vector<double>& y, double fs, double t_begin, double t_end, double period, double tone_hz,
                double amplitude, double cycles) {
  if (amplitude == 0.0 || tone_hz <= 0.0 || period <= 0.0) return;
  const double d = cycles / tone_hz;
  for (double tc = t_begin; tc + d <= t_end; tc += period) {
    const auto i0 = static_cast<std::size_t>(std::ceil(tc * fs - 1e-9));
    for (std::size_t i = i0; i < y.size(); ++i) {
      const double t = static_cast<double>(i) / fs;
      if (t >= tc + d) break;
      const double u = (t - tc) / d;
      y[i] += amplitude * std::sin(kTwoPi * tone_hz * (t - tc)) * 0.5 * (1.0 - std::cos(kTwoPi * u));
    }
  }
}

// Gaussian filter, truncated at 4 sigma, half-sample symmetric boundary.
std::vector<double> gaussian_smooth(const std::vector<double>& x, double sigma) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto radius = static_cast<std::ptrdiff_t>(4.0 * sigma + 0.5);
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    w[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (auto& v : w) v /= sum;
  const auto reflect = [n](std::ptrdiff_t i) {
    const std::ptrdiff_t period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
  };
  std::vector<double> padded(static_cast<std::size_t>(n + 2 * radius));
  for (std::ptrdiff_t i = -radius; i < n + radius; ++i) {
    padded[static_cast<std::size_t>(i + radius)] = x[static_cast<std::size_t>(reflect(i))];
  }
  std::vector<double> out(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* src = padded.data() + i;
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * src[k];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double get(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw SpecError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw SpecError(std::string("'") + key + "' must be an object");
  return j.at(key);
}

const json& list(const json& j, const char* key) {
  static const json empty = json::array();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_array()) throw SpecError(std::string("'") + key + "' must be an array");
  return j.at(key);
}

}  // namespace

NormalSource::NormalSource(std::uint64_t seed) : engine_(seed) {}

double NormalSource::uniform() {
  // 53-bit mantissa in (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalSource::operator()() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double a = kTwoPi * uniform();
  spare_ = r * std::sin(a);
  return r * std::cos(a);
}

SyntheticSpec parse_synthetic_spec(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SpecError(std::string("synthetic spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("synthetic spec must be a JSON object");
  SyntheticSpec s;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) throw SpecError("'seed' must be an integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  s.duration_s = get(j, "duration_s", s.duration_s);

  const auto& p = section(j, "pupil");
  s.pupil_fs = get(p, "fs_hz", s.pupil_fs);
  s.pupil_mean_mm = get(p, "mean_mm", s.pupil_mean_mm);
  s.drift_sd_mm = get(p, "drift_sd_mm", s.drift_sd_mm);
  s.drift_kernel_s = get(p, "drift_kernel_s", s.drift_kernel_s);
  s.episode_period_s = get(p, "episode_period_s", s.episode_period_s);
  const auto& h = section(p, "hippus");
  s.hippus.tone_hz = get(h, "tone_hz", s.hippus.tone_hz);
  s.hippus.amplitude_mm = get(h, "amplitude_mm", s.hippus.amplitude_mm);
  s.hippus.period_s = get(h, "period_s", s.hippus.period_s);
  s.hippus.offset_s = get(h, "offset_s", s.hippus.offset_s);
  s.hippus.cycles = get(h, "cycles", s.hippus.cycles);
  for (const auto& e : list(p, "episodes")) {
    PupilEpisode ep;
    ep.t0 = get(e, "t0", ep.t0);
    ep.t1 = get(e, "t1", ep.t1);
    ep.tone_hz = get(e, "tone_hz", ep.tone_hz);
    ep.amplitude_mm = get(e, "amplitude_mm", ep.amplitude_mm);
    s.pupil_episodes.push_back(ep);
  }

  const auto& r = section(j, "hr");
  s.hr_fs = get(r, "fs_hz", s.hr_fs);
  s.hr_mean_bpm = get(r, "mean_bpm", s.hr_mean_bpm);
  s.rsa_bpm = get(r, "rsa_bpm", s.rsa_bpm);
  s.rsa_period_s = get(r, "rsa_period_s", s.rsa_period_s);
  s.hr_noise_sd_bpm = get(r, "noise_sd_bpm", s.hr_noise_sd_bpm);
  for (const auto& e : list(r, "episodes")) {
    HrEpisode ep;
    ep.t0 = get(e, "t0", ep.t0);
    ep.t1 = get(e, "t1", ep.t1);
    ep.slope_bpm_per_s = get(e, "slope_bpm_per_s", ep.slope_bpm_per_s);
    s.hr_episodes.push_back(ep);
  }

  const auto& g = section(j, "gaze");
  s.gaze_fs = get(g, "fs_hz", s.gaze_fs);
  for (const auto& e : list(g, "fixations")) {
    Fixation f;
    f.t0 = get(e, "t0", f.t0);
    f.t1 = get(e, "t1", f.t1);
    f.line = static_cast<int>(get(e, "line", f.line));
    s.fixations.push_back(f);
  }
  validate(s);
  return s;
}

void validate(const SyntheticSpec& s) {
  if (!(s.duration_s > 0.0)) throw SpecError("duration_s must be > 0");
  if (!(s.pupil_fs > 0.0) || !(s.hr_fs > 0.0) || !(s.gaze_fs > 0.0)) throw SpecError("sampling rates must be > 0");
  if (s.drift_sd_mm < 0.0 || s.hr_noise_sd_bpm < 0.0) throw SpecError("noise SDs must be >= 0");
  if (!(s.drift_kernel_s > 0.0)) throw SpecError("drift_kernel_s must be > 0");
  if (!(s.rsa_period_s > 0.0)) throw SpecError("rsa_period_s must be > 0");
  if (!(s.hippus.cycles > 0.0) || !(s.episode_period_s > 0.0)) throw SpecError("burst cycles and period must be > 0");
  check_intervals(s.pupil_episodes, "pupil");
  check_intervals(s.hr_episodes, "hr");
  check_intervals(s.fixations, "gaze");
  for (const auto& f : s.fixations) {
    if (f.line < 1) throw SpecError("fixation line must be >= 1");
  }
}

SyntheticStreams generate_synthetic(const SyntheticSpec& s) {
  validate(s);
  NormalSource normal(s.seed);
  SyntheticStreams out;

  const std::size_t np = sample_count(s.duration_s, s.pupil_fs);
  std::vector<double> pupil(np, s.pupil_mean_mm);
  if (s.drift_sd_mm > 0.0) {
    std::vector<double> white(np);
    for (auto& v : white) v = normal();
    const auto drift = gaussian_smooth(white, s.drift_kernel_s * s.pupil_fs);
    double mean = 0.0;
    for (double v : drift) mean += v;
    mean /= static_cast<double>(np);
    double ss = 0.0;
    for (double v : drift) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(np));
    if (sd > 0.0) {
      for (std::size_t i = 0; i < np; ++i) pupil[i] += drift[i] / sd * s.drift_sd_mm;
    }
  }
  add_bursts(pupil, s.pupil_fs, s.hippus.offset_s, s.duration_s, s.hippus.period_s, s.hippus.tone_hz,
             s.hippus.amplitude_mm, s.hippus.cycles);
  for (const auto& e : s.pupil_episodes) {
    add_bursts(pupil, s.pupil_fs, e.t0, e.t1, s.episode_period_s, e.tone_hz, e.amplitude_mm, s.hippus.cycles);
  }
  out.pupil.reserve(np);
  for (std::size_t i = 0; i < np; ++i) {
    out.pupil.push_back(PupilSample{stamp(i, s.pupil_fs), pupil[i], pupil[i], true});
  }

  const std::size_t nh = sample_count(s.duration_s, s.hr_fs);
  out.hr.reserve(nh);
  for (std::size_t i = 0; i < nh; ++i) {
    const double t = static_cast<double>(i) / s.hr_fs;
    double v = s.hr_mean_bpm + s.rsa_bpm * std::sin(kTwoPi * t / s.rsa_period_s);
    if (s.hr_noise_sd_bpm > 0.0) v += s.hr_noise_sd_bpm * normal();
    for (const auto& e : s.hr_episodes) {
      if (t >= e.t0) v += e.slope_bpm_per_s * (std::min(t, e.t1) - e.t0);
    }
    out.hr.push_back(BeatSample{stamp(i, s.hr_fs), BeatKind::HR, v, beat_value_in_range(BeatKind::HR, v)});
  }

  if (!s.fixations.empty()) {
    const std::size_t ng = sample_count(s.duration_s, s.gaze_fs);
    out.gaze.reserve(ng);
    for (std::size_t i = 0; i < ng; ++i) {
      const double t = static_cast<double>(i) / s.gaze_fs;
      GazeSample g{stamp(i, s.gaze_fs), 0, false};
      for (const auto& f : s.fixations) {
        if (t >= f.t0 && t < f.t1) {
          g.line = f.line;
          g.valid = true;
          break;
        }
      }
      out.gaze.push_back(g);
    }
  }
  return out;
}

void write_synthetic(const SyntheticStreams& streams, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw SpecError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("pupil.csv");
    write_pupil_csv(f, streams.pupil);
  }
  {
    auto f = open("hr.csv");
    write_beats_csv(f, streams.hr);
  }
  if (!streams.gaze.empty()) {
    auto f = open("gaze.csv");
    write_gaze_csv(f, streams.gaze);
  }
}

}  // namespace rtms
