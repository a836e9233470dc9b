// Serial reference vs OpenMP kernels on the windowed index series.

#include <benchmark/benchmark.h>

#include "rtms/ipa.hpp"
#include "rtms/stress.hpp"
#include "rtms/synthetic.hpp"

namespace {

rtms::CleanSignal pupil_signal(double seconds) {
  rtms::SyntheticSpec spec;
  spec.seed = 1;
  spec.duration_s = seconds;
  spec.pupil_fs = 60.0;
  spec.pupil_episodes.push_back({seconds / 3, seconds / 2, 10.0, 0.1});
  const auto s = rtms::generate_synthetic(spec);
  return rtms::clean_pupil(s.pupil);
}

std::vector<rtms::HrPoint> heart_rate(double seconds) {
  rtms::NormalSource noise(2);
  std::vector<rtms::HrPoint> hr;
  // one beat every ~0.85 s
  for (rtms::TimeMs t = 0; t < static_cast<rtms::TimeMs>(seconds * 1000); t += 850) {
    hr.push_back({t, 70.0 + noise()});
  }
  return hr;
}

void BM_IpaSerial(benchmark::State& st) {
  const auto s = pupil_signal(static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(rtms::ipa_series_serial(s));
}

void BM_IpaParallel(benchmark::State& st) {
  const auto s = pupil_signal(static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(rtms::ipa_series(s));
}

void BM_StressSerial(benchmark::State& st) {
  const auto hr = heart_rate(static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(rtms::stress_index_series_serial(hr));
}

void BM_StressParallel(benchmark::State& st) {
  const auto hr = heart_rate(static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(rtms::stress_index_series(hr));
}

}  // namespace

BENCHMARK(BM_IpaSerial)->Arg(600)->Arg(3600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IpaParallel)->Arg(600)->Arg(3600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StressSerial)->Arg(600)->Arg(3600)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StressParallel)->Arg(600)->Arg(3600)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
