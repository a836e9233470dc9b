#pragma once

// Descriptives, one-way ANOVA, pairwise comparisons with effect sizes and
// Bonferroni correction, Welch t-tests, Pearson correlation, Levene's test.

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace rtms::stats {

struct GroupSummary {
  std::string label;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n-1 denominator
};

struct AnovaResult {
  double F = 0.0;  // +inf when SSW = 0 < SSB
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
  double eta2 = 0.0;
  double ssb = 0.0;
  double ssw = 0.0;
  bool infinite_f = false;
};

struct PairwiseResult {
  double F = 0.0;  // t^2, df (1, df2)
  double df2 = 0.0;
  double t = 0.0;
  double p_raw = 1.0;
  double p_bonferroni = 1.0;
  double cohen_d = 0.0;   // |mean difference| / pooled SD
  double d_from_t = 0.0;  // 2 t / sqrt(df2)
  bool infinite_f = false;
};

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

struct CorrResult {
  double r = 0.0;
  double df = 0.0;
  double p = 1.0;
};

using Groups = std::vector<std::pair<std::string, std::vector<double>>>;

GroupSummary summarize(const std::string& label, const std::vector<double>& xs);
/// Throws StatsError for a group with n < 2.
std::vector<GroupSummary> describe(const Groups& groups);

AnovaResult anova_from_summary(const std::vector<GroupSummary>& groups);
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

PairwiseResult pairwise_compare(const GroupSummary& a, const GroupSummary& b, int m = 1);

/// Throws StatsError when both variances are zero.
WelchResult welch_t(const GroupSummary& a, const GroupSummary& b);

/// Throws StatsError for n < 3, unequal lengths or zero variance.
CorrResult pearson(const std::vector<double>& x, const std::vector<double>& y);
/// Significance from a reported coefficient and sample size.
CorrResult pearson_from_r(double r, std::size_t n);

/// Classic Levene: ANOVA on absolute deviations from group means.
AnovaResult levene(const std::vector<std::vector<double>>& groups);

/// Per-session metrics row.
struct SessionRow {
  std::string condition;
  double expertise = 0.0;
  double bugs_resolved = 0.0;
  std::optional<double> avg_time_per_bug;
  double feedback_count = 0.0;
};

/// Header `condition,expertise,bugs_resolved,avg_time_per_bug,feedback_count`;
/// an empty avg_time_per_bug means no bug was resolved.
std::vector<SessionRow> read_metrics_csv(std::istream& in);

struct CorrCell {
  std::string condition;  // "all" for the pooled sample
  std::string measure;
  std::size_t n = 0;
  std::optional<CorrResult> result;  // empty when undefined
  std::string note;
};

struct PairCell {
  std::string measure;
  std::string a;
  std::string b;
  PairwiseResult result;
};

struct WelchCell {
  std::string a;
  std::string b;
  WelchResult result;
};

struct MeasureReport {
  std::string measure;
  std::vector<GroupSummary> groups;
  AnovaResult anova;
  std::optional<AnovaResult> levene;
};

struct AnalysisReport {
  std::vector<MeasureReport> measures;  // performance, time, expertise
  std::vector<PairCell> pairwise;       // performance and time
  std::vector<CorrCell> correlations;
  std::vector<WelchCell> feedback;
  int comparisons = 0;
};

/// Conditions are ordered control, stress, cognitive, combined, then others.
AnalysisReport analyze_sessions(const std::vector<SessionRow>& rows);
void write_text(std::ostream& out, const AnalysisReport& r);
void write_csv(std::ostream& out, const AnalysisReport& r);

}  // namespace rtms::stats
