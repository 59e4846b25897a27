#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tvcons/engines.hpp"

namespace tvcons {

inline constexpr const char* kMetricsHeader = "iter,disagreement_log,mean,objective,max_change";

/// One CSV row: natural log of the disagreement (or -inf when it is exactly 0).
struct MetricsRow {
  std::int64_t iteration = 0;
  double disagreement_log = 0;
  double mean = 0;
  double objective = 0;
  double max_change = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

MetricsRow to_row(const IterationMetrics& m);
std::vector<MetricsRow> to_rows(const std::vector<IterationMetrics>& metrics);

/// Shortest decimal form that parses back to the same double; "-inf" for -infinity.
std::string format_real(double v);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
/// Throws Error (with the path) when the file cannot be written.
void emit_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

std::vector<MetricsRow> parse_metrics_csv(std::istream& in);
std::vector<MetricsRow> parse_metrics_csv(const std::filesystem::path& path);

}  // namespace tvcons
