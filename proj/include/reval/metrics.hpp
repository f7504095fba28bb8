#pragma once

#include <map>
#include <string>
#include <vector>

namespace reval {

// --- core statistics ---------------------------------------------------------

// Sample Pearson product-moment correlation. Throws LengthMismatch and
// ZeroVariance (either input constant).
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Mean absolute error.
double mae(const std::vector<double>& x, const std::vector<double>& y);

// Quadratic-weighted kappa over integer ratings in [min_rating, max_rating]:
//   1 - (sum w_ij O_ij) / (sum w_ij E_ij),  w_ij = (i-j)^2 / (N-1)^2
// O is the observed confusion matrix, E the outer product of the marginal
// histograms scaled to the same total mass as O. Both raters constant at the
// same value is pinned to 1.0; any other degenerate denominator throws
// DegenerateAgreementDenominator.
double qwk(const std::vector<double>& x, const std::vector<double>& y, int min_rating,
           int max_rating);

struct DescribeStats {
  std::size_t count = 0;
  double mean = 0;
  double std_dev = 0;  // sample (n-1); 0 for a single observation
  double min = 0;
  double q25 = 0;
  double q50 = 0;
  double q75 = 0;
  double max = 0;

  bool operator==(const DescribeStats&) const = default;
};

// Distribution summary. Quartiles use linear interpolation between closest
// ranks (h = (n-1)p), which is what fractional quartiles on integer data
// require.
DescribeStats describe(const std::vector<double>& x);

enum class TTestKind { IndependentWelch, IndependentPooled, Paired };

const char* t_test_kind_name(TTestKind kind);

struct TTestResult {
  double t = 0;
  double p_two_sided = 1;
  double df = 0;

  bool operator==(const TTestResult&) const = default;
};

TTestResult t_test(const std::vector<double>& x, const std::vector<double>& y, TTestKind kind);

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation, relative accuracy target 1e-10. Exposed because the t-test
// p-values build on it and tests pin it against closed forms.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided Student-t tail probability for a given t statistic and df.
double student_t_p_two_sided(double t, double df);

// --- report assembly ---------------------------------------------------------

struct LabeledVector {
  std::string label;
  std::vector<double> values;  // positionally aligned across vectors
};

// A requested corr/MAE/QWK comparison; QWK needs the integer rating range.
struct ComparisonSpec {
  std::string label_a;
  std::string label_b;
  int qwk_min = 0;
  int qwk_max = 0;
};

struct PairMetrics {
  std::string label_a;
  std::string label_b;
  double corr = 0;
  double mae = 0;
  double qwk = 0;
};

struct PairTTest {
  std::string label_a;
  std::string label_b;
  TTestKind kind = TTestKind::Paired;
  TTestResult result;
};

struct DistributionStats {
  std::string label;
  DescribeStats stats;
};

struct CategoryMetrics {
  std::string category;
  std::vector<PairMetrics> pairs;
};

struct MetricsReport {
  std::vector<PairMetrics> overall;
  std::vector<CategoryMetrics> per_category;
  std::vector<DistributionStats> distributions;
  std::vector<PairTTest> t_tests;
};

struct ReportRequest {
  std::vector<ComparisonSpec> overall_pairs;
  std::vector<ComparisonSpec> category_pairs;  // applied to every category
  int category_qwk_min = 1;
  int category_qwk_max = 6;
  std::vector<std::pair<std::string, std::string>> t_test_pairs;
  std::vector<TTestKind> t_test_kinds = {TTestKind::Paired, TTestKind::IndependentWelch};
};

// Assembles every requested pair triple, per-category triple, distribution
// block, and t-test into one deterministic report. `category_vectors` maps
// category name -> labeled trait vectors.
MetricsReport build_report(const std::vector<LabeledVector>& vectors,
                           const std::map<std::string, std::vector<LabeledVector>>& category_vectors,
                           const ReportRequest& request);

// --- anomaly flags -----------------------------------------------------------

struct AnomalyFlag {
  std::string metric;  // flattened name, e.g. "overall.R1_vs_R2.corr"
  double observed = 0;
  double baseline_mean = 0;
  double threshold = 0;
};

// Flattens a report to named scalar metrics.
std::map<std::string, double> flatten_report(const MetricsReport& report);

// Flags every metric whose |observed - mean(baselines)| exceeds its
// threshold. Thresholds are keyed by metric kind ("corr", "mae", "qwk",
// "mean", "std", "t", "p") or by exact flattened name (which wins).
std::vector<AnomalyFlag> anomaly_check(const MetricsReport& report,
                                       const std::vector<MetricsReport>& baselines,
                                       const std::map<std::string, double>& thresholds);

}  // namespace reval
