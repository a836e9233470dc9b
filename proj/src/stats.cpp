#include "rtms/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "rtms/distributions.hpp"
#include "rtms/error.hpp"

namespace rtms::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

AnovaResult finish_anova(double ssb, double ssw, std::size_t k, std::size_t n_total) {
  if (k < 2) throw StatsError("ANOVA needs at least 2 groups");
  if (n_total <= k) throw StatsError("ANOVA needs more observations than groups");
  AnovaResult r;
  r.ssb = ssb;
  r.ssw = ssw;
  r.df1 = static_cast<double>(k - 1);
  r.df2 = static_cast<double>(n_total - k);
  if (ssw == 0.0) {
    if (ssb > 0.0) {
      r.F = kInf;
      r.p = 0.0;
      r.eta2 = 1.0;
      r.infinite_f = true;
    }
    return r;
  }
  r.F = (ssb / r.df1) / (ssw / r.df2);
  r.p = dist::f_sf(r.F, r.df1, r.df2);
  r.eta2 = ssb / (ssb + ssw);
  return r;
}

const std::vector<std::string>& known_order() {
  static const std::vector<std::string> order{"control", "stress", "cognitive", "combined"};
  return order;
}

std::vector<std::string> ordered_conditions(const std::vector<SessionRow>& rows) {
  std::vector<std::string> out;
  for (const auto& c : known_order()) {
    if (std::any_of(rows.begin(), rows.end(), [&](const SessionRow& r) { return r.condition == c; })) {
      out.push_back(c);
    }
  }
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.condition) == out.end()) out.push_back(r.condition);
  }
  return out;
}

std::string fmt(double v, int prec = 4) {
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string fmt_p(double p) {
  if (p < 1e-4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", p);
    return buf;
  }
  return fmt(p, 4);
}

std::string shortest(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

GroupSummary summarize(const std::string& label, const std::vector<double>& xs) {
  if (xs.size() < 2) throw StatsError("group '" + label + "' needs n >= 2");
  GroupSummary g;
  g.label = label;
  g.n = xs.size();
  g.mean = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - g.mean) * (x - g.mean);
  g.sd = std::sqrt(ss / static_cast<double>(g.n - 1));
  return g;
}

std::vector<GroupSummary> describe(const Groups& groups) {
  std::vector<GroupSummary> out;
  out.reserve(groups.size());
  for (const auto& [label, xs] : groups) out.push_back(summarize(label, xs));
  return out;
}

AnovaResult anova_from_summary(const std::vector<GroupSummary>& groups) {
  std::size_t n_total = 0;
  double sum = 0.0;
  for (const auto& g : groups) {
    if (g.n < 2) throw StatsError("group '" + g.label + "' needs n >= 2");
    if (g.sd < 0.0) throw StatsError("group '" + g.label + "' has negative sd");
    n_total += g.n;
    sum += static_cast<double>(g.n) * g.mean;
  }
  const double grand = sum / static_cast<double>(n_total);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const auto n = static_cast<double>(g.n);
    ssb += n * (g.mean - grand) * (g.mean - grand);
    ssw += (n - 1.0) * g.sd * g.sd;
  }
  return finish_anova(ssb, ssw, groups.size(), n_total);
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  std::size_t n_total = 0;
  double sum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw StatsError("every group needs n >= 2");
    n_total += g.size();
    for (double x : g) sum += x;
  }
  const double grand = sum / static_cast<double>(n_total);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const double m = mean_of(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }
  return finish_anova(ssb, ssw, groups.size(), n_total);
}

PairwiseResult pairwise_compare(const GroupSummary& a, const GroupSummary& b, int m) {
  if (m < 1) throw StatsError("number of comparisons must be >= 1");
  if (a.n < 2 || b.n < 2) throw StatsError("pairwise comparison needs n >= 2 per group");
  const auto na = static_cast<double>(a.n);
  const auto nb = static_cast<double>(b.n);
  PairwiseResult r;
  r.df2 = na + nb - 2.0;
  const double sp = std::sqrt(((na - 1.0) * a.sd * a.sd + (nb - 1.0) * b.sd * b.sd) / r.df2);
  const double diff = std::fabs(a.mean - b.mean);
  if (sp == 0.0) {
    if (diff > 0.0) {
      r.F = r.t = r.cohen_d = r.d_from_t = kInf;
      r.p_raw = r.p_bonferroni = 0.0;
      r.infinite_f = true;
    }
    return r;
  }
  r.cohen_d = diff / sp;
  r.t = r.cohen_d * std::sqrt(na * nb / (na + nb));
  r.F = r.t * r.t;
  r.d_from_t = 2.0 * r.t / std::sqrt(r.df2);
  r.p_raw = dist::t_two_sided_p(r.t, r.df2);
  r.p_bonferroni = std::min(1.0, m * r.p_raw);
  return r;
}

WelchResult welch_t(const GroupSummary& a, const GroupSummary& b) {
  if (a.n < 2 || b.n < 2) throw StatsError("Welch test needs n >= 2 per group");
  const double va = a.sd * a.sd / static_cast<double>(a.n);
  const double vb = b.sd * b.sd / static_cast<double>(b.n);
  if (va + vb == 0.0) throw StatsError("Welch test is degenerate: both variances are zero");
  WelchResult r;
  r.t = (a.mean - b.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
  r.p = dist::t_two_sided_p(r.t, r.df);
  return r;
}

CorrResult pearson_from_r(double r, std::size_t n) {
  if (n < 3) throw StatsError("correlation needs n >= 3");
  if (!(r >= -1.0 && r <= 1.0)) throw StatsError("r must lie in [-1, 1]");
  CorrResult c;
  c.r = r;
  c.df = static_cast<double>(n - 2);
  if (std::fabs(r) == 1.0) {
    c.p = 0.0;
    return c;
  }
  const double t = r * std::sqrt(c.df / (1.0 - r * r));
  c.p = dist::t_two_sided_p(t, c.df);
  return c;
}

CorrResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw StatsError("correlation needs equal-length samples");
  if (x.size() < 3) throw StatsError("correlation needs n >= 3");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw StatsError("correlation is undefined: zero variance");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return pearson_from_r(r, x.size());
}

AnovaResult levene(const std::vector<std::vector<double>>& groups) {
  std::vector<std::vector<double>> dev;
  dev.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.size() < 2) throw StatsError("every group needs n >= 2");
    const double m = mean_of(g);
    std::vector<double> d;
    d.reserve(g.size());
    for (double x : g) d.push_back(std::fabs(x - m));
    dev.push_back(std::move(d));
  }
  return anova_oneway(dev);
}

std::vector<SessionRow> read_metrics_csv(std::istream& in) {
  static const std::string kHeader = "condition,expertise,bugs_resolved,avg_time_per_bug,feedback_count";
  std::string line;
  std::size_t n = 0;
  std::vector<SessionRow> rows;
  const auto bad = [&](const std::string& why) { return StatsError("metrics line " + std::to_string(n) + ": " + why); };
  const auto number = [&](std::string_view s, const char* field) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
      throw bad(std::string("bad ") + field + " '" + std::string(s) + "'");
    }
    return v;
  };
  bool header = false;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kHeader) throw bad("expected header '" + kHeader + "'");
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 5) throw bad("expected 5 fields, got " + std::to_string(f.size()));
    SessionRow r;
    r.condition = std::string(f[0]);
    if (r.condition.empty()) throw bad("missing condition");
    r.expertise = number(f[1], "expertise");
    r.bugs_resolved = number(f[2], "bugs_resolved");
    if (!f[3].empty()) r.avg_time_per_bug = number(f[3], "avg_time_per_bug");
    r.feedback_count = number(f[4], "feedback_count");
    rows.push_back(std::move(r));
  }
  if (!header) throw StatsError("metrics file is empty");
  return rows;
}

AnalysisReport analyze_sessions(const std::vector<SessionRow>& rows) {
  const auto conds = ordered_conditions(rows);
  if (conds.size() < 2) throw StatsError("analysis needs at least 2 conditions");
  AnalysisReport rep;
  rep.comparisons = static_cast<int>(conds.size() * (conds.size() - 1) / 2);

  const auto column = [&](const std::string& c, auto get) {
    std::vector<double> xs;
    for (const auto& r : rows) {
      if (r.condition != c) continue;
      if (const auto v = get(r)) xs.push_back(*v);
    }
    return xs;
  };
  const auto perf = [](const SessionRow& r) { return std::optional<double>(r.bugs_resolved); };
  const auto time = [](const SessionRow& r) { return r.avg_time_per_bug; };
  const auto expertise = [](const SessionRow& r) { return std::optional<double>(r.expertise); };

  const auto measure = [&](const std::string& name, auto get) {
    MeasureReport m;
    m.measure = name;
    std::vector<std::vector<double>> raw;
    for (const auto& c : conds) {
      raw.push_back(column(c, get));
      try {
        m.groups.push_back(summarize(c, raw.back()));
      } catch (const StatsError& e) {
        throw StatsError(name + ": " + e.what());
      }
    }
    m.anova = anova_oneway(raw);
    m.levene = levene(raw);
    return m;
  };
  rep.measures.push_back(measure("performance", perf));
  rep.measures.push_back(measure("time", time));
  rep.measures.push_back(measure("expertise", expertise));

  for (std::size_t mi = 0; mi < 2; ++mi) {
    const auto& m = rep.measures[mi];
    for (std::size_t i = 0; i < conds.size(); ++i) {
      for (std::size_t j = i + 1; j < conds.size(); ++j) {
        rep.pairwise.push_back({m.measure, conds[i], conds[j], pairwise_compare(m.groups[i], m.groups[j], rep.comparisons)});
      }
    }
  }

  const auto correlate = [&](const std::string& label, const std::string& name, auto get, auto keep) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
      if (!keep(r)) continue;
      if (const auto v = get(r)) {
        x.push_back(r.expertise);
        y.push_back(*v);
      }
    }
    CorrCell cell{label, name, x.size(), std::nullopt, {}};
    try {
      cell.result = pearson(x, y);
    } catch (const StatsError& e) {
      cell.note = e.what();
    }
    rep.correlations.push_back(std::move(cell));
  };
  for (const auto& c : conds) {
    const auto in_cond = [&](const SessionRow& r) { return r.condition == c; };
    correlate(c, "performance", perf, in_cond);
    correlate(c, "time", time, in_cond);
  }
  const auto all = [](const SessionRow&) { return true; };
  correlate("all", "performance", perf, all);
  correlate("all", "time", time, all);

  std::vector<GroupSummary> fb;
  for (const auto& c : conds) {
    if (c == "control") continue;
    const auto xs = column(c, [](const SessionRow& r) { return std::optional<double>(r.feedback_count); });
    if (xs.size() >= 2) fb.push_back(summarize(c, xs));
  }
  for (std::size_t i = 0; i < fb.size(); ++i) {
    for (std::size_t j = i + 1; j < fb.size(); ++j) {
      try {
        rep.feedback.push_back({fb[i].label, fb[j].label, welch_t(fb[i], fb[j])});
      } catch (const StatsError&) {
        // Both groups constant: no test.
      }
    }
  }
  return rep;
}

void write_text(std::ostream& out, const AnalysisReport& r) {
  for (const auto& m : r.measures) {
    out << "== " << m.measure << " ==\n";
    for (const auto& g : m.groups) {
      out << "  " << g.label << ": n=" << g.n << " mean=" << fmt(g.mean, 2) << " sd=" << fmt(g.sd, 2) << '\n';
    }
    out << "  ANOVA F[" << fmt(m.anova.df1, 0) << "," << fmt(m.anova.df2, 0) << "] = " << fmt(m.anova.F, 2)
        << ", p = " << fmt_p(m.anova.p) << ", eta2 = " << fmt(m.anova.eta2, 3) << '\n';
    if (m.levene) {
      out << "  Levene F[" << fmt(m.levene->df1, 0) << "," << fmt(m.levene->df2, 0) << "] = " << fmt(m.levene->F, 2)
          << ", p = " << fmt_p(m.levene->p) << '\n';
    }
  }
  out << "== pairwise (Bonferroni m=" << r.comparisons << ") ==\n";
  for (const auto& c : r.pairwise) {
    out << "  " << c.measure << " " << c.a << " vs " << c.b << ": F[1," << fmt(c.result.df2, 0)
        << "] = " << fmt(c.result.F, 2) << ", p = " << fmt_p(c.result.p_raw)
        << ", p_bonf = " << fmt_p(c.result.p_bonferroni) << ", d = " << fmt(c.result.cohen_d, 2)
        << ", d_t = " << fmt(c.result.d_from_t, 2) << '\n';
  }
  out << "== expertise correlations ==\n";
  for (const auto& c : r.correlations) {
    out << "  " << c.condition << " " << c.measure << ": ";
    if (c.result) {
      out << "r(" << fmt(c.result->df, 0) << ") = " << fmt(c.result->r, 2) << ", p = " << fmt_p(c.result->p)
          << (c.result->p < 0.05 ? " (< .05)" : " (> .05)") << '\n';
    } else {
      out << "undefined (" << c.note << ")\n";
    }
  }
  out << "== feedback count (Welch) ==\n";
  for (const auto& c : r.feedback) {
    out << "  " << c.a << " vs " << c.b << ": t(" << fmt(c.result.df, 2) << ") = " << fmt(c.result.t, 2)
        << ", p = " << fmt_p(c.result.p) << '\n';
  }
}

void write_csv(std::ostream& out, const AnalysisReport& r) {
  out << "section,measure,a,b,statistic,value\n";
  const auto row = [&](const char* section, const std::string& measure, const std::string& a, const std::string& b,
                       const char* stat, double v) {
    out << section << ',' << measure << ',' << a << ',' << b << ',' << stat << ',' << shortest(v) << '\n';
  };
  for (const auto& m : r.measures) {
    for (const auto& g : m.groups) {
      row("describe", m.measure, g.label, "", "n", static_cast<double>(g.n));
      row("describe", m.measure, g.label, "", "mean", g.mean);
      row("describe", m.measure, g.label, "", "sd", g.sd);
    }
    row("anova", m.measure, "", "", "F", m.anova.F);
    row("anova", m.measure, "", "", "df1", m.anova.df1);
    row("anova", m.measure, "", "", "df2", m.anova.df2);
    row("anova", m.measure, "", "", "p", m.anova.p);
    row("anova", m.measure, "", "", "eta2", m.anova.eta2);
    if (m.levene) {
      row("levene", m.measure, "", "", "F", m.levene->F);
      row("levene", m.measure, "", "", "p", m.levene->p);
    }
  }
  for (const auto& c : r.pairwise) {
    row("pairwise", c.measure, c.a, c.b, "F", c.result.F);
    row("pairwise", c.measure, c.a, c.b, "p_raw", c.result.p_raw);
    row("pairwise", c.measure, c.a, c.b, "p_bonferroni", c.result.p_bonferroni);
    row("pairwise", c.measure, c.a, c.b, "cohen_d", c.result.cohen_d);
    row("pairwise", c.measure, c.a, c.b, "d_from_t", c.result.d_from_t);
  }
  for (const auto& c : r.correlations) {
    if (!c.result) continue;
    row("pearson", c.measure, c.condition, "", "r", c.result->r);
    row("pearson", c.measure, c.condition, "", "df", c.result->df);
    row("pearson", c.measure, c.condition, "", "p", c.result->p);
  }
  for (const auto& c : r.feedback) {
    row("welch", "feedback_count", c.a, c.b, "t", c.result.t);
    row("welch", "feedback_count", c.a, c.b, "df", c.result.df);
    row("welch", "feedback_count", c.a, c.b, "p", c.result.p);
  }
}

}  // namespace rtms::stats
