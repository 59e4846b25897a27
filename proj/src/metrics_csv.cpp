#include "tvcons/metrics_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tvcons/errors.hpp"

namespace tvcons {

MetricsRow to_row(const IterationMetrics& m) {
  MetricsRow r;
  r.iteration = m.iteration;
  r.disagreement_log = m.disagreement == 0.0 ? -std::numeric_limits<double>::infinity()
                                             : std::log(m.disagreement);
  r.mean = m.mean;
  r.objective = m.objective;
  r.max_change = m.max_change;
  return r;
}

std::vector<MetricsRow> to_rows(const std::vector<IterationMetrics>& metrics) {
  std::vector<MetricsRow> rows;
  rows.reserve(metrics.size());
  for (const auto& m : metrics) rows.push_back(to_row(m));
  return rows;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  // Round-trip precision (17 significant digits at most), locale independent.
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("cannot format value");
  return std::string(buf, ptr);
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.iteration << ',' << format_real(r.disagreement_log) << ',' << format_real(r.mean)
        << ',' << format_real(r.objective) << ',' << format_real(r.max_change) << '\n';
  }
}

void emit_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_metrics_csv(out, rows);
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

namespace {

double parse_real(const std::string& tok, int lineno) {
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error("metrics line " + std::to_string(lineno) + ": bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

std::vector<MetricsRow> parse_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw Error("missing metrics header");
  std::vector<MetricsRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw Error("metrics line " + std::to_string(lineno) + ": expected 5 columns");
    MetricsRow r;
    auto [ptr, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), r.iteration);
    if (ec != std::errc()) throw Error("metrics line " + std::to_string(lineno) + ": bad iteration");
    r.disagreement_log = parse_real(cells[1], lineno);
    r.mean = parse_real(cells[2], lineno);
    r.objective = parse_real(cells[3], lineno);
    r.max_change = parse_real(cells[4], lineno);
    rows.push_back(r);
  }
  return rows;
}

std::vector<MetricsRow> parse_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_metrics_csv(in);
}

}  // namespace tvcons
