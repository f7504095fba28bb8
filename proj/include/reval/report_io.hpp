#pragma once

#include <string>

#include "reval/metrics.hpp"

namespace reval {

// Machine-readable report document (versioned) and a fixed-width text view
// with one section per table: overall metrics, category-wise metrics,
// distribution statistics, significance tests.
std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& json_text);

std::string report_to_text(const MetricsReport& report);

void save_report(const MetricsReport& report, const std::string& json_path,
                 const std::string& text_path);
MetricsReport load_report(const std::string& json_path);

}  // namespace reval
