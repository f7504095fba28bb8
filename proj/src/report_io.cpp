#include "reval/report_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reval/error.hpp"

namespace reval {

namespace {

using nlohmann::json;

constexpr int kReportVersion = 1;

TTestKind kind_from_name(const std::string& name) {
  if (name == "welch") return TTestKind::IndependentWelch;
  if (name == "pooled") return TTestKind::IndependentPooled;
  if (name == "paired") return TTestKind::Paired;
  throw Error(ErrorCode::FormatError, "unknown t-test kind '" + name + "'");
}

json pair_to_json(const PairMetrics& p) {
  return json{{"a", p.label_a}, {"b", p.label_b}, {"corr", p.corr}, {"mae", p.mae},
              {"qwk", p.qwk}};
}

PairMetrics pair_from_json(const json& j) {
  PairMetrics p;
  p.label_a = j.at("a").get<std::string>();
  p.label_b = j.at("b").get<std::string>();
  p.corr = j.at("corr").get<double>();
  p.mae = j.at("mae").get<double>();
  p.qwk = j.at("qwk").get<double>();
  return p;
}

std::string fixed(double v, int precision) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string compact(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
  json j;
  j["format"] = "metrics-report";
  j["version"] = kReportVersion;

  j["overall"] = json::array();
  for (const auto& p : report.overall) j["overall"].push_back(pair_to_json(p));

  j["per_category"] = json::array();
  for (const auto& c : report.per_category) {
    json cc;
    cc["category"] = c.category;
    cc["pairs"] = json::array();
    for (const auto& p : c.pairs) cc["pairs"].push_back(pair_to_json(p));
    j["per_category"].push_back(cc);
  }

  j["distributions"] = json::array();
  for (const auto& d : report.distributions) {
    j["distributions"].push_back(json{{"label", d.label},
                                      {"count", d.stats.count},
                                      {"mean", d.stats.mean},
                                      {"std", d.stats.std_dev},
                                      {"min", d.stats.min},
                                      {"q25", d.stats.q25},
                                      {"q50", d.stats.q50},
                                      {"q75", d.stats.q75},
                                      {"max", d.stats.max}});
  }

  j["t_tests"] = json::array();
  for (const auto& t : report.t_tests) {
    j["t_tests"].push_back(json{{"a", t.label_a},
                                {"b", t.label_b},
                                {"kind", t_test_kind_name(t.kind)},
                                {"t", t.result.t},
                                {"p", t.result.p_two_sided},
                                {"df", t.result.df}});
  }
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("bad report JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "metrics-report")
    throw Error(ErrorCode::FormatError, "not a metrics-report document");
  const int version = j.value("version", -1);
  if (version != kReportVersion)
    throw Error(ErrorCode::FormatError,
                "unsupported report version " + std::to_string(version) + ", expected " +
                    std::to_string(kReportVersion));

  MetricsReport report;
  for (const auto& p : j.value("overall", json::array())) report.overall.push_back(pair_from_json(p));
  for (const auto& c : j.value("per_category", json::array())) {
    CategoryMetrics cm;
    cm.category = c.at("category").get<std::string>();
    for (const auto& p : c.at("pairs")) cm.pairs.push_back(pair_from_json(p));
    report.per_category.push_back(std::move(cm));
  }
  for (const auto& d : j.value("distributions", json::array())) {
    DistributionStats ds;
    ds.label = d.at("label").get<std::string>();
    ds.stats.count = d.at("count").get<std::size_t>();
    ds.stats.mean = d.at("mean").get<double>();
    ds.stats.std_dev = d.at("std").get<double>();
    ds.stats.min = d.at("min").get<double>();
    ds.stats.q25 = d.at("q25").get<double>();
    ds.stats.q50 = d.at("q50").get<double>();
    ds.stats.q75 = d.at("q75").get<double>();
    ds.stats.max = d.at("max").get<double>();
    report.distributions.push_back(std::move(ds));
  }
  for (const auto& t : j.value("t_tests", json::array())) {
    PairTTest tt;
    tt.label_a = t.at("a").get<std::string>();
    tt.label_b = t.at("b").get<std::string>();
    tt.kind = kind_from_name(t.at("kind").get<std::string>());
    tt.result.t = t.at("t").get<double>();
    tt.result.p_two_sided = t.at("p").get<double>();
    tt.result.df = t.at("df").get<double>();
    report.t_tests.push_back(tt);
  }
  return report;
}

std::string report_to_text(const MetricsReport& report) {
  std::ostringstream out;
  const int w = 14;

  if (!report.overall.empty()) {
    out << "Overall Performance Metrics\n";
    out << std::left << std::setw(w) << "Metric";
    for (const auto& p : report.overall)
      out << std::setw(w) << (p.label_a + " vs " + p.label_b);
    out << "\n";
    out << std::setw(w) << "Correlation";
    for (const auto& p : report.overall) out << std::setw(w) << fixed(p.corr, 3);
    out << "\n" << std::setw(w) << "MAE";
    for (const auto& p : report.overall) out << std::setw(w) << fixed(p.mae, 3);
    out << "\n" << std::setw(w) << "QWK";
    for (const auto& p : report.overall) out << std::setw(w) << fixed(p.qwk, 3);
    out << "\n\n";
  }

  if (!report.per_category.empty()) {
    out << "Category-Wise Performance Metrics\n";
    out << std::left << std::setw(w) << "Category";
    const auto& first = report.per_category.front().pairs;
    for (const auto& p : first) {
      const std::string pair = p.label_a + "/" + p.label_b;
      out << std::setw(w) << (pair + " Corr") << std::setw(w) << (pair + " MAE") << std::setw(w)
          << (pair + " QWK");
    }
    out << "\n";
    for (const auto& c : report.per_category) {
      out << std::setw(w) << c.category;
      for (const auto& p : c.pairs)
        out << std::setw(w) << fixed(p.corr, 3) << std::setw(w) << fixed(p.mae, 3) << std::setw(w)
            << fixed(p.qwk, 3);
      out << "\n";
    }
    out << "\n";
  }

  if (!report.distributions.empty()) {
    out << "Score Distribution Statistics\n";
    out << std::left << std::setw(w) << "Metric";
    for (const auto& d : report.distributions) out << std::setw(w) << d.label;
    out << "\n";
    const char* rows[] = {"Count", "Mean", "Std", "Min", "25%", "50%", "75%", "Max"};
    for (const char* row : rows) {
      out << std::setw(w) << row;
      for (const auto& d : report.distributions) {
        const DescribeStats& s = d.stats;
        std::string cell;
        if (std::string(row) == "Count") cell = std::to_string(s.count);
        else if (std::string(row) == "Mean") cell = fixed(s.mean, 2);
        else if (std::string(row) == "Std") cell = fixed(s.std_dev, 2);
        else if (std::string(row) == "Min") cell = compact(s.min);
        else if (std::string(row) == "25%") cell = compact(s.q25);
        else if (std::string(row) == "50%") cell = compact(s.q50);
        else if (std::string(row) == "75%") cell = compact(s.q75);
        else cell = compact(s.max);
        out << std::setw(w) << cell;
      }
      out << "\n";
    }
    out << "\n";
  }

  if (!report.t_tests.empty()) {
    out << "Statistical Significance of Difference\n";
    out << std::left << std::setw(w + 6) << "Comparison" << std::setw(w) << "Kind" << std::setw(w)
        << "t-statistic" << std::setw(w) << "p-value" << std::setw(w) << "df" << "\n";
    for (const auto& t : report.t_tests) {
      std::ostringstream p;
      p << std::setprecision(3) << t.result.p_two_sided;
      out << std::setw(w + 6) << (t.label_a + " vs " + t.label_b) << std::setw(w)
          << t_test_kind_name(t.kind) << std::setw(w) << fixed(t.result.t, 3) << std::setw(w)
          << p.str() << std::setw(w) << fixed(t.result.df, 1) << "\n";
    }
  }
  return out.str();
}

void save_report(const MetricsReport& report, const std::string& json_path,
                 const std::string& text_path) {
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write report: " + json_path);
    out << report_to_json(report);
  }
  if (!text_path.empty()) {
    std::ofstream out(text_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write report: " + text_path);
    out << report_to_text(report);
  }
}

MetricsReport load_report(const std::string& json_path) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read report: " + json_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

}  // namespace reval
