#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cfrlab/errors.hpp"

namespace cfrlab::report {

struct ResultRow {
  std::string game;
  std::string method;  // rule name or "rlcfr"
  uint64_t seed = 0;
  int iteration = 0;
  double exploitability = 0;
  long wall_time_ms = 0;
};

// Schema: game,method,seed,iteration,exploitability,wall_time_ms
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
// Validates iteration >= 1 and exploitability >= -1e-9 on every row.
std::vector<ResultRow> read_results_csv(const std::string& path);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Static line chart, log-scaled on both axes (non-positive values are
// clamped to the smallest positive point).
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

// Per-(game, method, iteration) mean exploitability across seeds.
std::map<std::string, std::map<std::string, std::vector<std::pair<double, double>>>>
aggregate_means(const std::vector<ResultRow>& rows);

}  // namespace cfrlab::report
