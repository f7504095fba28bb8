#include "reval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "reval/error.hpp"

namespace reval {

namespace {

void require_same_length(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "vectors have lengths " + std::to_string(x.size()) +
                                               " and " + std::to_string(y.size()));
}

double mean_of(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0;
  double s = 0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  require_same_length(x, y);
  if (x.size() < 2) throw Error(ErrorCode::LengthMismatch, "pearson needs length >= 2");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0)
    throw Error(ErrorCode::ZeroVariance, "pearson undefined for a constant vector");
  return sxy / std::sqrt(sxx * syy);
}

double mae(const std::vector<double>& x, const std::vector<double>& y) {
  require_same_length(x, y);
  if (x.empty()) throw Error(ErrorCode::LengthMismatch, "mae needs length >= 1");
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::fabs(x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

double qwk(const std::vector<double>& x, const std::vector<double>& y, int min_rating,
           int max_rating) {
  require_same_length(x, y);
  if (x.empty()) throw Error(ErrorCode::LengthMismatch, "qwk needs length >= 1");
  if (max_rating < min_rating)
    throw Error(ErrorCode::OutOfRange, "max_rating below min_rating");

  const int n_ratings = max_rating - min_rating + 1;
  auto to_index = [&](double v, const char* side) -> int {
    double r = std::round(v);
    if (std::fabs(v - r) > 1e-9)
      throw Error(ErrorCode::OutOfRange,
                  std::string(side) + " value " + std::to_string(v) + " is not an integer rating");
    int iv = static_cast<int>(r);
    if (iv < min_rating || iv > max_rating)
      throw Error(ErrorCode::OutOfRange, std::string(side) + " value " + std::to_string(iv) +
                                             " outside rating range [" +
                                             std::to_string(min_rating) + ", " +
                                             std::to_string(max_rating) + "]");
    return iv - min_rating;
  };

  std::vector<std::vector<double>> observed(n_ratings, std::vector<double>(n_ratings, 0.0));
  std::vector<double> hist_x(n_ratings, 0.0), hist_y(n_ratings, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int a = to_index(x[i], "x");
    const int b = to_index(y[i], "y");
    observed[a][b] += 1.0;
    hist_x[a] += 1.0;
    hist_y[b] += 1.0;
  }

  if (n_ratings == 1) return 1.0;  // both raters pinned to the single rating

  const double total = static_cast<double>(x.size());
  const double denom_scale = static_cast<double>(n_ratings - 1) * (n_ratings - 1);
  double weighted_observed = 0, weighted_expected = 0;
  for (int i = 0; i < n_ratings; ++i) {
    for (int j = 0; j < n_ratings; ++j) {
      const double w = static_cast<double>(i - j) * (i - j) / denom_scale;
      weighted_observed += w * observed[i][j];
      weighted_expected += w * hist_x[i] * hist_y[j] / total;
    }
  }

  if (weighted_expected == 0) {
    if (x == y) return 1.0;
    throw Error(ErrorCode::DegenerateAgreementDenominator,
                "expected agreement mass is zero and vectors differ");
  }
  return 1.0 - weighted_observed / weighted_expected;
}

DescribeStats describe(const std::vector<double>& x) {
  if (x.empty()) throw Error(ErrorCode::LengthMismatch, "describe needs length >= 1");
  DescribeStats d;
  d.count = x.size();
  d.mean = mean_of(x);
  d.std_dev = std::sqrt(sample_variance(x, d.mean));

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  d.min = sorted.front();
  d.max = sorted.back();

  // linear interpolation between closest ranks: h = (n-1)p
  auto quantile = [&](double p) {
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };
  d.q25 = quantile(0.25);
  d.q50 = quantile(0.50);
  d.q75 = quantile(0.75);
  return d;
}

// --- regularized incomplete beta ----------------------------------------------

namespace {

// Continued fraction for I_x(a,b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) return h;
  }
  throw Error(ErrorCode::OutOfRange, "incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0))
    throw Error(ErrorCode::OutOfRange, "incomplete beta needs a, b > 0");
  if (x < 0 || x > 1) throw Error(ErrorCode::OutOfRange, "incomplete beta needs x in [0,1]");
  if (x == 0) return 0.0;
  if (x == 1) return 1.0;

  const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                          (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_p_two_sided(double t, double df) {
  if (df <= 0) throw Error(ErrorCode::OutOfRange, "t distribution needs df > 0");
  if (t == 0) return 1.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

const char* t_test_kind_name(TTestKind kind) {
  switch (kind) {
    case TTestKind::IndependentWelch: return "welch";
    case TTestKind::IndependentPooled: return "pooled";
    case TTestKind::Paired: return "paired";
  }
  return "unknown";
}

TTestResult t_test(const std::vector<double>& x, const std::vector<double>& y, TTestKind kind) {
  if (x.size() < 2 || y.size() < 2)
    throw Error(ErrorCode::LengthMismatch, "t-test needs lengths >= 2");

  TTestResult r;
  if (kind == TTestKind::Paired) {
    require_same_length(x, y);
    std::vector<double> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
    const double md = mean_of(diff);
    const double vd = sample_variance(diff, md);
    const double n = static_cast<double>(diff.size());
    if (vd == 0) {
      if (md == 0) {
        r.t = 0;
        r.p_two_sided = 1.0;
        r.df = n - 1;
        return r;
      }
      throw Error(ErrorCode::ZeroVariance, "paired differences constant and nonzero");
    }
    r.t = md / std::sqrt(vd / n);
    r.df = n - 1;
  } else {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    const double vx = sample_variance(x, mx);
    const double vy = sample_variance(y, my);
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    if (vx == 0 && vy == 0) {
      if (mx == my) {
        r.t = 0;
        r.p_two_sided = 1.0;
        r.df = nx + ny - 2;
        return r;
      }
      throw Error(ErrorCode::ZeroVariance, "both samples constant with different means");
    }
    if (kind == TTestKind::IndependentWelch) {
      const double sx = vx / nx;
      const double sy = vy / ny;
      r.t = (mx - my) / std::sqrt(sx + sy);
      r.df = (sx + sy) * (sx + sy) /
             (sx * sx / (nx - 1) + sy * sy / (ny - 1));
    } else {
      const double pooled = ((nx - 1) * vx + (ny - 1) * vy) / (nx + ny - 2);
      r.t = (mx - my) / std::sqrt(pooled * (1.0 / nx + 1.0 / ny));
      r.df = nx + ny - 2;
    }
  }
  r.p_two_sided = student_t_p_two_sided(r.t, r.df);
  return r;
}

// --- report assembly ----------------------------------------------------------

namespace {

const std::vector<double>& find_vector(const std::vector<LabeledVector>& vectors,
                                       const std::string& label) {
  for (const auto& v : vectors)
    if (v.label == label) return v.values;
  throw Error(ErrorCode::NotFound, "no vector labeled '" + label + "'");
}

PairMetrics compute_pair(const std::vector<LabeledVector>& vectors, const ComparisonSpec& spec,
                         int default_min, int default_max) {
  const auto& a = find_vector(vectors, spec.label_a);
  const auto& b = find_vector(vectors, spec.label_b);
  int lo = spec.qwk_min, hi = spec.qwk_max;
  if (lo == 0 && hi == 0) {
    lo = default_min;
    hi = default_max;
  }
  PairMetrics m;
  m.label_a = spec.label_a;
  m.label_b = spec.label_b;
  m.corr = pearson(a, b);
  m.mae = mae(a, b);
  m.qwk = qwk(a, b, lo, hi);
  return m;
}

}  // namespace

MetricsReport build_report(
    const std::vector<LabeledVector>& vectors,
    const std::map<std::string, std::vector<LabeledVector>>& category_vectors,
    const ReportRequest& request) {
  MetricsReport report;

  for (const auto& spec : request.overall_pairs)
    report.overall.push_back(compute_pair(vectors, spec, 0, 0));

  for (const auto& [category, traits] : category_vectors) {
    CategoryMetrics cm;
    cm.category = category;
    for (const auto& spec : request.category_pairs)
      cm.pairs.push_back(
          compute_pair(traits, spec, request.category_qwk_min, request.category_qwk_max));
    report.per_category.push_back(std::move(cm));
  }

  for (const auto& v : vectors)
    report.distributions.push_back({v.label, describe(v.values)});

  for (const auto& [la, lb] : request.t_test_pairs) {
    const auto& a = find_vector(vectors, la);
    const auto& b = find_vector(vectors, lb);
    for (TTestKind kind : request.t_test_kinds) {
      PairTTest tt;
      tt.label_a = la;
      tt.label_b = lb;
      tt.kind = kind;
      tt.result = t_test(a, b, kind);
      report.t_tests.push_back(tt);
    }
  }
  return report;
}

std::map<std::string, double> flatten_report(const MetricsReport& report) {
  std::map<std::string, double> flat;
  auto pair_key = [](const std::string& a, const std::string& b) { return a + "_vs_" + b; };

  for (const auto& p : report.overall) {
    const std::string base = "overall." + pair_key(p.label_a, p.label_b);
    flat[base + ".corr"] = p.corr;
    flat[base + ".mae"] = p.mae;
    flat[base + ".qwk"] = p.qwk;
  }
  for (const auto& c : report.per_category) {
    for (const auto& p : c.pairs) {
      const std::string base = "category." + c.category + "." + pair_key(p.label_a, p.label_b);
      flat[base + ".corr"] = p.corr;
      flat[base + ".mae"] = p.mae;
      flat[base + ".qwk"] = p.qwk;
    }
  }
  for (const auto& d : report.distributions) {
    const std::string base = "dist." + d.label;
    flat[base + ".count"] = static_cast<double>(d.stats.count);
    flat[base + ".mean"] = d.stats.mean;
    flat[base + ".std"] = d.stats.std_dev;
    flat[base + ".min"] = d.stats.min;
    flat[base + ".q25"] = d.stats.q25;
    flat[base + ".q50"] = d.stats.q50;
    flat[base + ".q75"] = d.stats.q75;
    flat[base + ".max"] = d.stats.max;
  }
  for (const auto& t : report.t_tests) {
    const std::string base =
        "ttest." + pair_key(t.label_a, t.label_b) + "." + t_test_kind_name(t.kind);
    flat[base + ".t"] = t.result.t;
    flat[base + ".p"] = t.result.p_two_sided;
    flat[base + ".df"] = t.result.df;
  }
  return flat;
}

std::vector<AnomalyFlag> anomaly_check(const MetricsReport& report,
                                       const std::vector<MetricsReport>& baselines,
                                       const std::map<std::string, double>& thresholds) {
  if (baselines.empty())
    throw Error(ErrorCode::ConfigError, "anomaly check needs at least one baseline report");

  const auto current = flatten_report(report);
  std::vector<std::map<std::string, double>> base_flat;
  base_flat.reserve(baselines.size());
  for (const auto& b : baselines) base_flat.push_back(flatten_report(b));

  std::vector<AnomalyFlag> flags;
  for (const auto& [name, value] : current) {
    double threshold = 0;
    bool have_threshold = false;
    if (auto exact = thresholds.find(name); exact != thresholds.end()) {
      threshold = exact->second;
      have_threshold = true;
    } else {
      const auto dot = name.rfind('.');
      const std::string kind = dot == std::string::npos ? name : name.substr(dot + 1);
      if (auto by_kind = thresholds.find(kind); by_kind != thresholds.end()) {
        threshold = by_kind->second;
        have_threshold = true;
      }
    }
    if (!have_threshold) continue;

    double sum = 0;
    std::size_t n = 0;
    for (const auto& bf : base_flat) {
      if (auto it = bf.find(name); it != bf.end()) {
        sum += it->second;
        ++n;
      }
    }
    if (n == 0) continue;
    const double baseline_mean = sum / static_cast<double>(n);
    if (std::fabs(value - baseline_mean) > threshold)
      flags.push_back({name, value, baseline_mean, threshold});
  }
  return flags;
}

}  // namespace reval
