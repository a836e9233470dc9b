// Acceptance suite. `rtms_acceptance [A1 ... A7]` runs the named criteria (all
// by default), prints one PASS/FAIL line each, and exits non-zero on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brute_dwt.hpp"
#include "rtms/distributions.hpp"
#include "rtms/ipa.hpp"
#include "rtms/reference.hpp"
#include "rtms/stats.hpp"
#include "rtms/stress.hpp"
#include "scenario.hpp"

using namespace rtms;
namespace ref = rtms::stats::reference;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

Outcome a1() {
  Outcome o;
  const auto perf = stats::anova_from_summary(ref::summaries(ref::Measure::Performance));
  const auto time = stats::anova_from_summary(ref::summaries(ref::Measure::Time));
  o.require(within(perf.F, 109.4, 110.5) && perf.df1 == 3 && perf.df2 == 116,
            fmt("performance F(%g,%g) = %.4f in [109.4, 110.5]", perf.df1, perf.df2, perf.F));
  o.require(within(time.F, 48.0, 49.0) && time.df1 == 3 && time.df2 == 116,
            fmt("time F(%g,%g) = %.4f in [48.0, 49.0]", time.df1, time.df2, time.F));
  return o;
}

Outcome a2() {
  Outcome o;
  const auto e = stats::anova_from_summary(ref::summaries(ref::Measure::Expertise));
  o.require(within(e.F, 1.40, 1.55), fmt("expertise F(3,116) = %.4f in [1.40, 1.55]", e.F));
  o.require(e.p > 0.05, fmt("expertise p = %.4f > .05", e.p));
  return o;
}

Outcome a3() {
  Outcome o;
  const auto rep = ref::reproduce_pairwise();
  int time_ok = 0, time_n = 0, perf_ok = 0, perf_n = 0;
  for (const auto& c : rep.cells) {
    const bool is_time = c.cell.measure == ref::Measure::Time;
    if (c.excluded) continue;
    (is_time ? time_n : perf_n)++;
    if (c.reproduces()) (is_time ? time_ok : perf_ok)++;
  }
  const auto spot = [&](ref::Measure m, const char* a, const char* b) {
    for (const auto& c : rep.cells) {
      if (c.cell.measure == m && std::string(c.cell.a) == a && std::string(c.cell.b) == b) {
        o.require(c.reproduces(), fmt("spot %s %s vs %s: printed F = %.2f, CD = %.2f; F in [%.2f, %.2f], d in [%.2f, %.2f]",
                                      ref::to_string(m).c_str(), a, b, c.cell.F, c.cell.cd, c.F.lo, c.F.hi,
                                      c.d_from_t.lo, c.d_from_t.hi));
      }
    }
  };
  spot(ref::Measure::Time, "stress", "combined");
  spot(ref::Measure::Performance, "control", "stress");
  o.require(time_ok == 6 && time_n == 6, fmt("time cells reproduced: %d of %d", time_ok, time_n));
  o.require(perf_ok == 5 && perf_n == 5,
            fmt("performance cells reproduced: %d of %d non-excluded (need 5 of 6 with the excluded cell)", perf_ok,
                perf_n));
  bool excluded_reported = false;
  for (const auto& d : rep.discrepancies) {
    excluded_reported = excluded_reported || d.find("(excluded)") != std::string::npos;
    o.notes.push_back("     discrepancy: " + d);
  }
  o.require(excluded_reported, "discrepancy report covers the excluded cell");
  return o;
}

Outcome a4() {
  Outcome o;
  for (const auto& c : ref::correlations()) {
    const auto r = stats::pearson_from_r(c.r, c.n);
    const bool sig = r.p < 0.05;
    o.require(sig == c.significant, fmt("%s/%s r = %.2f, n = %zu: p = %.5f %s .05", c.condition, c.measure, c.r, c.n,
                                        r.p, sig ? "<" : ">"));
  }
  return o;
}

std::vector<const LogEntry*> triggers(const SessionLog& log) { return testutil::entries_of(log, "trigger"); }

Outcome a5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = testutil::make_scenario(testutil::load_spec("rosl.json"), testutil::load_spec("task.json"));
  const auto in = s.inputs();
  const auto run = [&](ConditionMode m, double cooldown) {
    SessionConfig cfg;
    cfg.mode = m;
    cfg.cooldown_s = cooldown;
    return run_session(in, cfg);
  };
  const auto describe = [](const std::vector<const LogEntry*>& t) {
    std::string out;
    for (const auto* e : t) out += fmt(" %s@%.1fs", e->payload["source"].get<std::string>().c_str(), e->t / 1000.0);
    return out.empty() ? std::string(" none") : out;
  };
  const auto cog_log = run(ConditionMode::Cognitive, 30);
  const auto cog = triggers(cog_log);
  o.require(cog.size() == 1 && cog[0]->payload["source"] == "cognitive" && within(cog[0]->t, 300000, 311000),
            "cognitive: exactly one cognitive trigger in [300, 311] s:" + describe(cog));
  const auto st_log = run(ConditionMode::Stress, 30);
  const auto st = triggers(st_log);
  o.require(st.size() == 1 && st[0]->payload["source"] == "stress" && within(st[0]->t, 500000, 535000),
            "stress: exactly one stress trigger in [500, 535] s:" + describe(st));
  const auto both_log = run(ConditionMode::Combined, 0);
  const auto both = triggers(both_log);
  std::set<std::string> sources;
  for (const auto* e : both) sources.insert(e->payload["source"]);
  o.require(both.size() == 2 && sources.size() == 2, "combined (cooldown 0): both sources trigger:" + describe(both));
  const auto ctl_log = run(ConditionMode::Control, 30);
  const auto ctl = triggers(ctl_log);
  o.require(ctl.empty(), "control: no triggers:" + describe(ctl));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 10.0, fmt("runtime %.2f s < 10 s", secs));
  return o;
}

std::vector<TimeMs> trigger_times(const SessionLog& log) {
  std::vector<TimeMs> out;
  for (const auto* e : triggers(log)) out.push_back(e->t);
  return out;
}

Outcome a6() {
  Outcome o;
  const auto dir = testutil::temp_dir("acceptance_a6");
  for (auto mode : {ConditionMode::Control, ConditionMode::Cognitive, ConditionMode::Stress, ConditionMode::Combined}) {
    auto cfg = testutil::write_scenario(dir, mode);
    cfg.auto_respond = AutoRespond::Accept;
    cfg.log_path = dir / "first.jsonl";
    run_replay(cfg);
    cfg.log_path = dir / "second.jsonl";
    run_replay(cfg);
    const auto a = testutil::slurp(dir / "first.jsonl");
    o.require(!a.empty() && a == testutil::slurp(dir / "second.jsonl"),
              fmt("%s replay twice: byte-identical logs (%zu bytes)", to_string(mode).c_str(), a.size()));
  }

  // Union property on seeded random streams.
  SyntheticSpec rosl;
  rosl.seed = 1001;
  rosl.pupil_fs = 60;
  const auto cal = calibrate(generate_synthetic(rosl).pupil, generate_synthetic(rosl).hr, SessionConfig{});
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  int held = 0, total_triggers = 0;
  std::string first_violation;
  for (int i = 0; i < 100; ++i) {
    SyntheticSpec spec;
    spec.seed = 5000 + static_cast<std::uint64_t>(i);
    spec.duration_s = 150;
    spec.pupil_fs = 60;
    spec.episode_period_s = 0.5 + u(rng);
    for (double t = 10 + 30 * u(rng); t + 20 < spec.duration_s; t += 25 + 40 * u(rng)) {
      spec.pupil_episodes.push_back({t, t + 5 + 15 * u(rng), 6 + 6 * u(rng), 0.05 + 0.1 * u(rng)});
    }
    for (double t = 5 + 40 * u(rng); t + 20 < spec.duration_s; t += 40 + 40 * u(rng)) {
      spec.hr_episodes.push_back({t, t + 10 + 20 * u(rng), -0.1 - 0.4 * u(rng)});
    }
    const auto streams = generate_synthetic(spec);
    SessionInputs in;
    in.pupil = streams.pupil;
    in.beats = streams.hr;
    in.cognitive = cal.cognitive;
    in.stress = cal.stress;
    const auto run = [&](ConditionMode m) {
      SessionConfig cfg;
      cfg.mode = m;
      cfg.cooldown_s = 0;
      cfg.timeout_s = 0;
      return trigger_times(run_session(in, cfg));
    };
    const auto c = run(ConditionMode::Cognitive);
    const auto s = run(ConditionMode::Stress);
    const auto b = run(ConditionMode::Combined);
    std::vector<TimeMs> uni = c;
    uni.insert(uni.end(), s.begin(), s.end());
    std::sort(uni.begin(), uni.end());
    total_triggers += static_cast<int>(b.size());
    if (uni == b) {
      ++held;
    } else if (first_violation.empty()) {
      first_violation = fmt(" (first violation: seed %d, %zu + %zu vs %zu)", 5000 + i, c.size(), s.size(), b.size());
    }
  }
  o.require(held == 100, fmt("union property held on %d of 100 seeded streams", held) + first_violation);
  o.require(total_triggers > 100, fmt("combined triggers across streams: %d", total_triggers));
  return o;
}

Outcome a7() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);

  // IPA invariances.
  int inv_ok = 0;
  for (int i = 0; i < 50; ++i) {
    auto x = testutil::gaussian(600, 100 + static_cast<std::uint64_t>(i), 0.02);
    const auto b = testutil::bursts(600, 60.0, 4 + 8 * u(rng), 0.5 + u(rng), 0.1);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += b[k];
    const double base = ipa_value(x, 60.0);
    const double a = 0.01 + 100 * u(rng), c = -10 + 20 * u(rng);
    auto y = x;
    for (auto& v : y) v = a * v + c;
    inv_ok += ipa_value(y, 60.0) == base;
  }
  o.require(inv_ok == 50, fmt("IPA scale/shift invariance: %d of 50", inv_ok));
  bool zero = true;
  for (double level : {0.0, 1.0, 3.5, -2.25, 1e6}) zero = zero && ipa_value(std::vector<double>(600, level), 60.0) == 0.0;
  o.require(zero, "IPA is zero on constant windows");

  // DWT against the brute-force oracle.
  double worst = 0;
  int vectors = 0;
  for (int i = 0; i < 120; ++i) {
    const auto x = testutil::gaussian(64 + rng() % 1000, 900 + static_cast<std::uint64_t>(i));
    for (int level : {1, 2}) worst = std::max(worst, testutil::max_abs_diff(dwt_detail(x, level).coeffs, testutil::brute_detail(x, level)));
    ++vectors;
  }
  o.require(worst <= 1e-9, fmt("DWT vs brute force on %d random vectors: max |diff| = %.2e", vectors, worst));

  // Stress slope on linear heart rate.
  double slope_err = 0;
  for (int i = 0; i < 100; ++i) {
    const double b0 = 50 + 50 * u(rng), slope = -1 + 2 * u(rng);
    std::vector<HrPoint> hr;
    TimeMs t = static_cast<TimeMs>(rng() % 10000);
    for (int k = 0; k < 40; ++k) {
      hr.push_back({t, b0 + slope * static_cast<double>(t) / 1000.0});
      t += 200 + static_cast<TimeMs>(rng() % 1500);
    }
    slope_err = std::max(slope_err, std::abs(hr_slope(hr).beta - slope));
  }
  o.require(slope_err <= 1e-9, fmt("stress slope exact on linear HR: max error %.2e", slope_err));

  // ANOVA path equivalence and F = t^2.
  double path_err = 0, ft_err = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::vector<double>> raw;
    stats::Groups named;
    const int k = 2 + static_cast<int>(rng() % 4);
    for (int g = 0; g < k; ++g) {
      auto x = testutil::gaussian(3 + rng() % 40, 7000 + static_cast<std::uint64_t>(i * 10 + g), 0.5 + u(rng));
      for (auto& v : x) v += g * u(rng);
      raw.push_back(x);
      named.emplace_back("g" + std::to_string(g), x);
    }
    const auto a = stats::anova_oneway(raw);
    const auto b = stats::anova_from_summary(stats::describe(named));
    path_err = std::max(path_err, std::abs(a.F - b.F) / std::max(1.0, a.F));
    const auto s = stats::describe(named);
    const auto p = stats::pairwise_compare(s[0], s[1]);
    ft_err = std::max(ft_err, std::abs(p.F - p.t * p.t) / std::max(1.0, p.F));
    ft_err = std::max(ft_err, std::abs(stats::anova_oneway({raw[0], raw[1]}).F - p.F) / std::max(1.0, p.F));
  }
  o.require(path_err <= 1e-9, fmt("ANOVA raw vs summary path: max rel diff %.2e", path_err));
  o.require(ft_err <= 1e-9, fmt("pairwise F = t^2 = two-group ANOVA F: max rel diff %.2e", ft_err));

  // Distribution tails.
  const double fc = dist::f_critical(0.05, 3, 116), tc = dist::t_critical(0.05, 58);
  o.require(std::abs(fc - 2.683) <= 1e-3, fmt("F(3,116) critical at .05 = %.6f (2.683)", fc));
  o.require(std::abs(tc - 2.0017) <= 1e-3, fmt("t(58) critical at .05 = %.6f (2.0017)", tc));
  o.require(std::abs(dist::f_sf(fc, 3, 116) - 0.05) < 1e-9 && std::abs(dist::t_two_sided_p(tc, 58) - 0.05) < 1e-9,
            "tail probabilities at the critical values are .05");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::pair<const char*, std::function<Outcome()>>> criteria{
      {"A1", {"omnibus ANOVA reproduction", a1}},
      {"A2", {"expertise null reproduction", a2}},
      {"A3", {"pairwise table reproduction", a3}},
      {"A4", {"correlation significance classifications", a4}},
      {"A5", {"end-to-end trigger detection", a5}},
      {"A6", {"determinism", a6}},
      {"A7", {"signal-math property suite", a7}},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty()) {
    for (const auto& [id, _] : criteria) wanted.push_back(id);
  }
  bool all = true;
  for (const auto& id : wanted) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %s\n", id.c_str());
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& n : o.notes) std::printf("  %s\n", n.c_str());
    std::printf("%s %s: %s (%.2f s)\n", id.c_str(), o.pass ? "PASS" : "FAIL", it->second.first, secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
