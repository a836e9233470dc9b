#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rtms/error.hpp"
#include "rtms/synthetic.hpp"
#include "test_util.hpp"

using namespace rtms;

namespace {

double mean_hr(const std::vector<BeatSample>& hr, TimeMs a, TimeMs b) {
  double s = 0;
  int n = 0;
  for (const auto& x : hr) {
    if (x.t >= a && x.t < b) {
      s += x.value;
      ++n;
    }
  }
  return s / n;
}

}  // namespace

TEST_CASE("normal source is seeded and standard") {
  NormalSource a(42), b(42), c(43);
  double s = 0, s2 = 0;
  bool differs = false;
  for (int i = 0; i < 20000; ++i) {
    const double x = a();
    REQUIRE(x == b());
    differs = differs || x != c();
    s += x;
    s2 += x * x;
  }
  CHECK(differs);
  CHECK(std::abs(s / 20000) < 0.03);
  CHECK(std::abs(s2 / 20000 - 1.0) < 0.05);
}

TEST_CASE("no episodes gives stationary streams") {
  SyntheticSpec spec;
  spec.seed = 1;
  spec.duration_s = 60;
  const auto s = generate_synthetic(spec);
  CHECK(s.pupil.size() == 60 * 250 + 1);
  CHECK(s.hr.size() == 61);
  CHECK(s.gaze.empty());
  CHECK(s.pupil[1].t == 4);
  double pm = 0;
  for (const auto& p : s.pupil) pm += p.left_mm;
  CHECK(pm / static_cast<double>(s.pupil.size()) == doctest::Approx(3.5).epsilon(0.02));
  CHECK(mean_hr(s.hr, 0, 30000) == doctest::Approx(mean_hr(s.hr, 30000, 61000)).epsilon(0.02));
}

TEST_CASE("hr episode slope arithmetic") {
  SyntheticSpec spec;
  spec.seed = 2;
  spec.duration_s = 400;
  spec.rsa_bpm = 0;
  spec.hr_noise_sd_bpm = 0;
  spec.hr_episodes.push_back({300, 360, -0.2});
  const auto s = generate_synthetic(spec);
  CHECK(s.hr[300].value == doctest::Approx(70.0));
  CHECK(s.hr[360].value - s.hr[300].value == doctest::Approx(-12.0));
  CHECK(s.hr[399].value == doctest::Approx(58.0));
}

TEST_CASE("pupil episode adds oscillation energy") {
  SyntheticSpec spec;
  spec.seed = 3;
  spec.duration_s = 60;
  spec.pupil_episodes.push_back({20, 40, 10.0, 0.1});
  const auto s = generate_synthetic(spec);
  const auto hf_energy = [&](TimeMs a, TimeMs b) {
    double e = 0;
    for (std::size_t i = 1; i < s.pupil.size(); ++i) {
      if (s.pupil[i].t >= a && s.pupil[i].t < b) {
        const double d = s.pupil[i].left_mm - s.pupil[i - 1].left_mm;
        e += d * d;
      }
    }
    return e;
  };
  CHECK(hf_energy(20000, 40000) > 2.0 * hf_energy(0, 20000));
}

TEST_CASE("gaze follows fixations") {
  SyntheticSpec spec;
  spec.duration_s = 10;
  spec.fixations = {{0, 5, 12}, {5, 10, 30}};
  const auto s = generate_synthetic(spec);
  CHECK(s.gaze.size() == 201);
  CHECK(s.gaze[0].line == 12);
  CHECK(s.gaze[150].line == 30);
}

TEST_CASE("overlapping episodes are rejected") {
  SyntheticSpec spec;
  spec.hr_episodes = {{10, 30, -0.1}, {20, 40, -0.2}};
  CHECK_THROWS_AS(validate(spec), SpecError);
  spec.hr_episodes = {{10, 10, -0.1}};
  CHECK_THROWS_AS(validate(spec), SpecError);
  spec.hr_episodes = {{10, 20, -0.1}, {20, 30, -0.2}};
  CHECK_NOTHROW(validate(spec));
  SyntheticSpec p;
  p.pupil_episodes = {{1, 5, 10, 0.1}, {4, 6, 10, 0.1}};
  CHECK_THROWS_AS(generate_synthetic(p), SpecError);
}

TEST_CASE("spec json") {
  std::istringstream in(R"({"seed": 9, "duration_s": 30,
    "pupil": {"episodes": [{"t0": 5, "t1": 10, "tone_hz": 8, "amplitude_mm": 0.2}]},
    "hr": {"mean_bpm": 65, "episodes": [{"t0": 1, "t1": 2, "slope_bpm_per_s": -0.3}]},
    "gaze": {"fixations": [{"t0": 0, "t1": 30, "line": 4}]}})");
  const auto spec = parse_synthetic_spec(in);
  CHECK(spec.seed == 9);
  CHECK(spec.duration_s == 30);
  CHECK(spec.pupil_episodes.at(0).tone_hz == 8);
  CHECK(spec.hr_mean_bpm == 65);
  CHECK(spec.hr_episodes.at(0).slope_bpm_per_s == -0.3);
  CHECK(spec.fixations.at(0).line == 4);
  CHECK(spec.pupil_fs == 250);
  std::istringstream bad(R"({"seed": "x"})");
  CHECK_THROWS_AS(parse_synthetic_spec(bad), SpecError);
  std::istringstream broken("{");
  CHECK_THROWS_AS(parse_synthetic_spec(broken), SpecError);
}

TEST_CASE("same spec and seed give identical files") {
  std::ifstream in(testutil::data_dir() / "synthetic" / "task.json");
  auto spec = parse_synthetic_spec(in);
  spec.duration_s = 60;
  const auto a = testutil::temp_dir("synth_a");
  const auto b = testutil::temp_dir("synth_b");
  write_synthetic(generate_synthetic(spec), a);
  write_synthetic(generate_synthetic(spec), b);
  for (const char* f : {"pupil.csv", "hr.csv", "gaze.csv"}) {
    REQUIRE(std::filesystem::exists(a / f));
    CHECK(testutil::slurp(a / f) == testutil::slurp(b / f));
  }
  spec.seed += 1;
  const auto c = testutil::temp_dir("synth_c");
  write_synthetic(generate_synthetic(spec), c);
  CHECK(testutil::slurp(a / "pupil.csv") != testutil::slurp(c / "pupil.csv"));
}
