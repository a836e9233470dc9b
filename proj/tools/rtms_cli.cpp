// rtms: calibrate, replay, live, simulate, metrics, analyze.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtms/error.hpp"
#include "rtms/live.hpp"
#include "rtms/session.hpp"
#include "rtms/stats.hpp"
#include "rtms/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rtms;

namespace {

struct PathOpts {
  std::string pupil, hr, rr, gaze, client_events, hints, cognitive_baseline, stress_baseline, log;
};

struct SessionOpts {
  SessionConfig cfg;
  PathOpts paths;
  std::string mode = "control";
  std::string speed = "max";
  std::string auto_respond = "none";
  int expertise = -1;
};

void add_stream_options(CLI::App* app, SessionOpts& o) {
  app->add_option("--pupil", o.paths.pupil, "Pupil CSV (t_ms,left_mm,right_mm,valid)");
  app->add_option("--hr", o.paths.hr, "Heart-rate CSV (t_ms,value) in bpm");
  app->add_option("--rr", o.paths.rr, "RR-interval CSV (t_ms,value) in ms");
  app->add_option("--ipa-window", o.cfg.ipa.window_s, "IPA window (s)")->capture_default_str();
  app->add_option("--ipa-hop", o.cfg.ipa.hop_s, "IPA hop (s)")->capture_default_str();
  app->add_option("--stress-window", o.cfg.stress.window_s, "Stress window (s)")->capture_default_str();
  app->add_option("--stress-hop", o.cfg.stress.hop_s, "Stress hop (s)")->capture_default_str();
  app->add_option("--fs", o.cfg.preprocess.fs, "Resampling rate (Hz)")->capture_default_str();
}

void add_session_options(CLI::App* app, SessionOpts& o) {
  add_stream_options(app, o);
  app->add_option("--mode", o.mode, "Condition mode")
      ->check(CLI::IsMember({"control", "cognitive", "stress", "combined"}))
      ->capture_default_str();
  app->add_option("--gaze", o.paths.gaze, "Gaze CSV (t_ms,line,valid)");
  app->add_option("--hints", o.paths.hints, "Hint database");
  app->add_option("--cognitive-baseline", o.paths.cognitive_baseline, "Cognitive baseline profile");
  app->add_option("--stress-baseline", o.paths.stress_baseline, "Stress baseline profile");
  app->add_option("--log", o.paths.log, "Session log output (JSON lines)");
  app->add_option("--cooldown", o.cfg.cooldown_s, "Cooldown after a prompt resolves (s)")->capture_default_str();
  app->add_option("--timeout", o.cfg.timeout_s, "Unanswered prompt timeout (s)")->capture_default_str();
  app->add_option("--speed", o.speed, "Pacing")->check(CLI::IsMember({"max", "realtime"}))->capture_default_str();
  app->add_option("--speed-factor", o.cfg.speed_factor, "Stream seconds per wall second in realtime")
      ->capture_default_str();
  app->add_option("--expertise", o.expertise, "Pre-test score (0-10), echoed to the log")->check(CLI::Range(0, 10));
  app->add_option("--hint-dismiss", o.cfg.hint_dismiss_s, "Hint auto-dismiss delay (s)")->capture_default_str();
}

void add_replay_options(CLI::App* app, SessionOpts& o) {
  app->add_option("--client-events", o.paths.client_events, "Client events CSV (t_ms,event,value)");
  app->add_option("--auto-respond", o.auto_respond, "Answer prompts automatically")
      ->check(CLI::IsMember({"none", "accept", "decline"}))
      ->capture_default_str();
  app->add_option("--response-delay", o.cfg.response_delay_s, "Auto-response delay (s)")->capture_default_str();
}

std::optional<fs::path> path_or_none(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

SessionConfig resolve(SessionOpts& o) {
  auto cfg = o.cfg;
  cfg.mode = *condition_mode_from(o.mode);
  cfg.speed = o.speed == "realtime" ? ReplaySpeed::Realtime : ReplaySpeed::Max;
  cfg.auto_respond = *auto_respond_from(o.auto_respond);
  if (o.expertise >= 0) cfg.expertise = o.expertise;
  cfg.pupil_path = path_or_none(o.paths.pupil);
  cfg.hr_path = path_or_none(o.paths.hr);
  cfg.rr_path = path_or_none(o.paths.rr);
  cfg.gaze_path = path_or_none(o.paths.gaze);
  cfg.client_events_path = path_or_none(o.paths.client_events);
  cfg.hints_path = path_or_none(o.paths.hints);
  cfg.cognitive_baseline_path = path_or_none(o.paths.cognitive_baseline);
  cfg.stress_baseline_path = path_or_none(o.paths.stress_baseline);
  cfg.log_path = path_or_none(o.paths.log);
  return cfg;
}

json profile_json(const BaselineProfile& p, const RoslReport& r) {
  json j{{"mu", p.mu},
         {"sigma", p.sigma},
         {"theta", p.theta},
         {"k", p.k},
         {"duration_s", p.duration_s},
         {"n_windows", p.n_windows},
         {"rosl_pass", r.pass},
         {"meets_recommended", r.meets_recommended},
         {"coverage", r.coverage}};
  return j;
}

json metrics_json(const SessionMetrics& m) {
  json j{{"bugs_resolved", m.bugs_resolved},
         {"task_duration_s", m.task_duration_s},
         {"feedback_count", m.feedback_count},
         {"aborted", m.aborted}};
  j["avg_time_per_bug"] = m.avg_time_per_bug ? json(*m.avg_time_per_bug) : json(nullptr);
  if (m.expertise) j["expertise"] = *m.expertise;
  if (m.mode) j["mode"] = *m.mode;
  return j;
}

json summary_of(const SessionLog& log) {
  if (log.entries.empty()) return json::object();
  json s = log.entries.back().payload;
  s["entries"] = log.entries.size();
  if (!log.rejected.empty()) s["rejected_client_events"] = log.rejected;
  return s;
}

std::vector<stats::SessionRow> rows_from_logs(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw StatsError("no .jsonl logs in '" + dir.string() + "'");
  std::vector<stats::SessionRow> rows;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    SessionMetrics m;
    try {
      m = compute_metrics(in);
    } catch (const LoadError& e) {
      throw LoadError(f.string() + ": " + e.what());
    }
    if (!m.mode) throw StatsError(f.string() + ": summary has no mode");
    if (!m.expertise) throw StatsError(f.string() + ": summary has no expertise");
    rows.push_back({*m.mode, static_cast<double>(*m.expertise), static_cast<double>(m.bugs_resolved),
                    m.avg_time_per_bug, static_cast<double>(m.feedback_count)});
  }
  return rows;
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time multimodal scaffolding engine"};
  app.require_subcommand(1);

  SessionOpts cal_opts;
  std::string cal_out = ".";
  auto* cal = app.add_subcommand("calibrate", "Build baseline profiles from a resting recording");
  add_stream_options(cal, cal_opts);
  cal->add_option("--k", cal_opts.cfg.calibration.k, "Threshold multiplier")->capture_default_str();
  cal->add_option("--out-dir", cal_out, "Directory for the baseline files")->capture_default_str();

  SessionOpts rep_opts;
  auto* rep = app.add_subcommand("replay", "Run a session over recorded streams");
  add_session_options(rep, rep_opts);
  add_replay_options(rep, rep_opts);

  SessionOpts live_opts;
  LiveOptions live_net;
  auto* live = app.add_subcommand("live", "Serve a session to one client over TCP");
  add_session_options(live, live_opts);
  live->add_option("--host", live_net.host, "Listen address")->capture_default_str();
  live->add_option("--port", live_net.port, "Listen port (0 = ephemeral)")->capture_default_str();

  std::string sim_spec, sim_out = ".";
  std::optional<std::uint64_t> sim_seed;
  auto* sim = app.add_subcommand("simulate", "Generate synthetic streams from a JSON spec");
  sim->add_option("--spec", sim_spec, "Spec file (JSON)")->required();
  sim->add_option("--out-dir", sim_out, "Output directory")->capture_default_str();
  sim->add_option("--seed", sim_seed, "Override the spec seed");

  std::string met_log;
  long long met_start = 0;
  auto* met = app.add_subcommand("metrics", "Compute session metrics from a log");
  met->add_option("--log", met_log, "Session log (JSON lines)")->required();
  met->add_option("--task-start", met_start, "Task start (ms)")->capture_default_str();

  std::string an_csv, an_logs, an_out_csv;
  auto* an = app.add_subcommand("analyze", "Statistical report over per-session metrics");
  auto* an_csv_opt = an->add_option("--metrics", an_csv, "Metrics CSV");
  auto* an_logs_opt = an->add_option("--logs", an_logs, "Directory of session logs");
  an_csv_opt->excludes(an_logs_opt);
  an->add_option("--out-csv", an_out_csv, "Also write the report as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what());
  }

  try {
    if (*cal) {
      auto cfg = resolve(cal_opts);
      const auto r = run_calibration(cfg, cal_out);
      std::cout << json{{"cognitive", profile_json(r.cognitive, r.cognitive_report)},
                        {"stress", profile_json(r.stress, r.stress_report)},
                        {"out_dir", cal_out}}
                       .dump()
                << '\n';
    } else if (*rep) {
      const auto log = run_replay(resolve(rep_opts));
      for (const auto& r : log.rejected) std::cerr << "rejected client event " << r << '\n';
      std::cout << summary_of(log).dump() << '\n';
    } else if (*live) {
      live_net.on_listening = [](std::uint16_t port) {
        std::cerr << json{{"listening", port}}.dump() << std::endl;
      };
      const auto log = run_live(resolve(live_opts), live_net);
      std::cout << summary_of(log).dump() << '\n';
      if (log.aborted) return fail("aborted", "client disconnected; partial log written");
    } else if (*sim) {
      std::ifstream in(sim_spec, std::ios::binary);
      if (!in) throw SpecError("cannot open spec '" + sim_spec + "'");
      auto spec = parse_synthetic_spec(in);
      if (sim_seed) spec.seed = *sim_seed;
      const auto s = generate_synthetic(spec);
      write_synthetic(s, sim_out);
      std::cout << json{{"out_dir", sim_out},
                        {"pupil_samples", s.pupil.size()},
                        {"hr_samples", s.hr.size()},
                        {"gaze_samples", s.gaze.size()}}
                       .dump()
                << '\n';
    } else if (*met) {
      std::ifstream in(met_log, std::ios::binary);
      if (!in) throw LoadError("cannot open log '" + met_log + "'");
      std::cout << metrics_json(compute_metrics(in, met_start)).dump() << '\n';
    } else if (*an) {
      std::vector<stats::SessionRow> rows;
      if (!an_logs.empty()) {
        rows = rows_from_logs(an_logs);
      } else if (!an_csv.empty()) {
        std::ifstream in(an_csv, std::ios::binary);
        if (!in) throw LoadError("cannot open metrics '" + an_csv + "'");
        rows = stats::read_metrics_csv(in);
      } else {
        return fail("usage_error", "analyze needs --metrics or --logs");
      }
      const auto report = stats::analyze_sessions(rows);
      stats::write_text(std::cout, report);
      if (!an_out_csv.empty()) {
        std::ofstream out(an_out_csv, std::ios::binary);
        if (!out) throw LoadError("cannot write '" + an_out_csv + "'");
        stats::write_csv(out, report);
      }
    }
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const fs::filesystem_error& e) {
    return fail("io_error", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return 0;
}
