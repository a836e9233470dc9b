#include <doctest.h>

#include <cmath>

#include "rtms/error.hpp"
#include "rtms/preprocess.hpp"

using namespace rtms;

namespace {

std::vector<PupilSample> constant(double mm, TimeMs dt, int n) {
  std::vector<PupilSample> out;
  for (int i = 0; i < n; ++i) out.push_back({i * dt, mm, mm, true});
  return out;
}

}  // namespace

TEST_CASE("remove_blinks leaves clean data alone") {
  const auto s = constant(3.5, 10, 100);
  CHECK(remove_blinks(s) == s);
}

TEST_CASE("remove_blinks pads an invalid sample") {
  auto s = constant(3.5, 10, 300);
  s[100].valid = false;  // t = 1000
  const auto out = remove_blinks(s, 100.0);
  for (const auto& x : out) {
    const bool near = x.t >= 900 && x.t <= 1100;
    CHECK(x.valid == !near);
  }
}

TEST_CASE("tiny diameters are blinks") {
  auto s = constant(3.5, 10, 100);
  s[50].left_mm = s[50].right_mm = 0.2;  // t = 500
  const auto out = remove_blinks(s, 100.0);
  CHECK_FALSE(out[50].valid);
  CHECK_FALSE(out[45].valid);
  CHECK(out[30].valid);
}

TEST_CASE("clamp_artifacts range and slew") {
  const auto s = constant(3.5, 4, 50);
  CHECK(clamp_artifacts(s) == s);
  auto hi = s;
  hi[10].left_mm = hi[10].right_mm = 9.5;
  CHECK_FALSE(clamp_artifacts(hi)[10].valid);
  const std::vector<PupilSample> jump{{0, 3.5, 3.5, true}, {4, 4.5, 4.5, true}};
  const auto out = clamp_artifacts(jump);
  CHECK(out[0].valid);
  CHECK_FALSE(out[1].valid);
}

TEST_CASE("resample linear midpoint") {
  const std::vector<PupilSample> s{{0, 3.0, 3.0, true}, {1000, 4.0, 4.0, true}};
  const auto c = resample_uniform(s, 2.0);
  REQUIRE(c.size() == 3);
  CHECK(c.values[0] == doctest::Approx(3.0));
  CHECK(c.values[1] == doctest::Approx(3.5));
  CHECK(c.values[2] == doctest::Approx(4.0));
}

TEST_CASE("resample constant stays constant") {
  const auto c = resample_uniform(constant(3.5, 4, 1000), 60.0);
  for (double v : c.values) CHECK(v == doctest::Approx(3.5));
}

TEST_CASE("long gaps become missing, short ones interpolated") {
  auto s = constant(3.5, 10, 300);
  for (auto& x : s) {
    if (x.t > 1000 && x.t < 1600) x.valid = false;  // 600 ms gap
    if (x.t > 2000 && x.t < 2300) x.valid = false;  // 300 ms gap
  }
  const auto c = resample_uniform(s, 100.0, 500.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double t = c.time_at(i);
    if (t > 1000 && t < 1600) {
      CHECK(c.mask[i] == SampleMask::Missing);
      CHECK(std::isnan(c.values[i]));
    } else if (t > 2000 && t < 2300) {
      CHECK(c.mask[i] == SampleMask::Interpolated);
    }
  }
}

TEST_CASE("resample needs two anchors") {
  CHECK_THROWS_AS(resample_uniform(constant(3.5, 4, 1)), InsufficientDataError);
}

TEST_CASE("normalize to baseline") {
  CleanSignal s;
  s.values = {3.0, 4.0, 5.0};
  s.mask.assign(3, SampleMask::Measured);
  const auto z = normalize_to_baseline(s, 4.0, 1.0);
  CHECK(z.values == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(normalize_to_baseline(s, 3.0, 2.0).values[0] == 0.0);
  CHECK(normalize_to_baseline(s, 2.0, 3.0).values[2] == 1.0);
  CHECK_THROWS_AS(normalize_to_baseline(s, 4.0, 0.0), DegenerateBaselineError);
}

TEST_CASE("clean_pupil pipeline and stats") {
  auto s = constant(3.5, 4, 2500);
  s[500].valid = false;
  const auto c = clean_pupil(s);
  CHECK(c.fs == 60.0);
  const auto st = signal_stats(c);
  CHECK(st.mean == doctest::Approx(3.5));
  CHECK(st.sd == doctest::Approx(0.0));
  CHECK(st.n == c.size());
}
