#pragma once

// Seeded synthetic sensor sessions with injected load episodes.
//
// pupil(t) = mean + drift(t) + hippus bursts + episode bursts
// hr(t)    = mean + RSA sinusoid + white noise + episode ramps (held after t1)

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <random>
#include <vector>

#include "rtms/signals.hpp"

namespace rtms {

struct PupilEpisode {
  double t0 = 0.0;
  double t1 = 0.0;
  double tone_hz = 10.0;
  double amplitude_mm = 0.1;
};

struct HrEpisode {
  double t0 = 0.0;
  double t1 = 0.0;
  double slope_bpm_per_s = 0.0;
};

struct Fixation {
  double t0 = 0.0;
  double t1 = 0.0;
  int line = 1;
};

/// Hann-windowed tone bursts of `cycles` cycles every `period_s`.
struct BurstTrain {
  double tone_hz = 10.0;
  double amplitude_mm = 0.1;
  double period_s = 4.0;
  double offset_s = 0.7;
  double cycles = 2.0;
};

struct SyntheticSpec {
  std::uint64_t seed = 0;
  double duration_s = 120.0;

  double pupil_fs = 250.0;
  double pupil_mean_mm = 3.5;
  double drift_sd_mm = 0.05;
  double drift_kernel_s = 1.0;
  BurstTrain hippus;
  double episode_period_s = 1.0;
  std::vector<PupilEpisode> pupil_episodes;

  double hr_fs = 1.0;
  double hr_mean_bpm = 70.0;
  double rsa_bpm = 3.0;
  double rsa_period_s = 4.3;
  double hr_noise_sd_bpm = 0.05;
  std::vector<HrEpisode> hr_episodes;

  double gaze_fs = 20.0;
  std::vector<Fixation> fixations;  // gaze stream emitted only when non-empty
};

struct SyntheticStreams {
  std::vector<PupilSample> pupil;
  std::vector<BeatSample> hr;
  std::vector<GazeSample> gaze;
};

/// Reads a JSON spec; absent keys keep their defaults. Throws SpecError.
SyntheticSpec parse_synthetic_spec(std::istream& in);

/// Throws SpecError on overlapping episodes within a channel, empty episode
/// intervals, or non-positive rates and durations.
void validate(const SyntheticSpec& spec);

/// Bit-reproducible from the spec (including its seed).
SyntheticStreams generate_synthetic(const SyntheticSpec& spec);

/// Writes pupil.csv, hr.csv and (with fixations) gaze.csv into `dir`.
void write_synthetic(const SyntheticStreams& streams, const std::filesystem::path& dir);

/// Platform-independent normal deviates (mt19937_64 + Box-Muller).
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed);
  double operator()();

 private:
  double uniform();
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace rtms
