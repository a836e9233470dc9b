#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "oracles/frozen_values.hpp"
#include "rtms/ipa.hpp"
#include "test_util.hpp"

using namespace rtms;

TEST_CASE("ipa matches the frozen reference values") {
  CHECK(ipa_value(oracle::kIpaFastInput, 60.0) == doctest::Approx(oracle::kIpaFast));
  CHECK(ipa_value(oracle::kIpaSlowInput, 60.0) == doctest::Approx(oracle::kIpaSlow));
  CHECK(ipa_value(oracle::kIpaNoiseInput, 60.0) == doctest::Approx(oracle::kIpaNoise));
}

TEST_CASE("faster bursts give a larger index") {
  CHECK(ipa_value(oracle::kIpaFastInput, 60.0) > ipa_value(oracle::kIpaSlowInput, 60.0));
  const auto fast = testutil::bursts(600, 60.0, 8.0, 1.0, 0.1);
  const auto slow = testutil::bursts(600, 60.0, 2.0, 1.0, 0.1);
  CHECK(ipa_value(fast, 60.0) > ipa_value(slow, 60.0));
}

TEST_CASE("constant window gives zero") {
  CHECK(ipa_value(std::vector<double>(600, 3.5), 60.0) == 0.0);
  CHECK(ipa_value(std::vector<double>(600, 0.0), 60.0) == 0.0);
}

TEST_CASE("scale and shift invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = testutil::gaussian(600, 300 + static_cast<std::uint64_t>(trial), 0.05);
    const auto b = testutil::bursts(600, 60.0, 8.0, 1.0, 0.1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += b[i];
    const double base = ipa_value(x, 60.0);
    const double a = scale(rng), c = shift(rng);
    auto y = x;
    for (auto& v : y) v = a * v + c;
    REQUIRE(ipa_value(y, 60.0) == base);
  }
  CHECK(ipa_value(oracle::kIpaFastInput, 60.0) == ipa_value([] {
          auto y = oracle::kIpaFastInput;
          for (auto& v : y) v *= 3.0;
          return y;
        }(), 60.0));
}

TEST_CASE("series window count") {
  const auto s = testutil::clean(testutil::gaussian(30 * 60, 1), 60.0);
  CHECK(ipa_series(s).size() == 21);
  CHECK(ipa_series(testutil::clean({}, 60.0)).empty());
  const auto pts = ipa_series(s);
  CHECK(pts.front().t == 10000);
  CHECK(pts.back().t == 30000);
}

TEST_CASE("parallel and serial series are bit-identical") {
  auto v = testutil::gaussian(300 * 60, 9, 0.05);
  const auto b = testutil::bursts(v.size(), 60.0, 6.0, 1.5, 0.1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
  auto s = testutil::clean(v, 60.0);
  for (std::size_t i = 4000; i < 4500; ++i) {
    s.values[i] = std::numeric_limits<double>::quiet_NaN();
    s.mask[i] = SampleMask::Missing;
  }
  const auto par = ipa_series(s);
  const auto ser = ipa_series_serial(s);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    REQUIRE(par[i].t == ser[i].t);
    REQUIRE(std::memcmp(&par[i].value, &ser[i].value, sizeof(double)) == 0);
    REQUIRE(par[i].coverage == ser[i].coverage);
  }
}

TEST_CASE("low coverage windows are skipped") {
  auto s = testutil::clean(testutil::gaussian(600, 2), 60.0);
  for (std::size_t i = 0; i < 400; ++i) {
    s.values[i] = std::numeric_limits<double>::quiet_NaN();
    s.mask[i] = SampleMask::Missing;
  }
  CHECK_FALSE(ipa_window(s, 0, 600));
  auto t = testutil::clean(testutil::gaussian(600, 2), 60.0);
  for (std::size_t i = 0; i < 200; ++i) t.mask[i] = SampleMask::Missing;
  const auto p = ipa_window(t, 0, 600);
  REQUIRE(p);
  CHECK(p->coverage == doctest::Approx(400.0 / 600.0));
}

TEST_CASE("a gap splits the window and the longest run is used") {
  const auto base = testutil::bursts(600, 60.0, 8.0, 1.0, 0.1);
  auto s = testutil::clean(base, 60.0);
  for (std::size_t i = 100; i < 160; ++i) {
    s.values[i] = std::numeric_limits<double>::quiet_NaN();
    s.mask[i] = SampleMask::Missing;
  }
  const auto p = ipa_window(s, 0, 600);
  REQUIRE(p);
  const std::vector<double> run(base.begin() + 160, base.end());
  CHECK(p->value == doctest::Approx(ipa_value(run, 60.0)));
}
