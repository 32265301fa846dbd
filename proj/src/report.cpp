#include "cfrlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cfrlab::report {

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "game,method,seed,iteration,exploitability,wall_time_ms\n" << std::setprecision(17);
  for (const auto& r : rows)
    os << r.game << ',' << r.method << ',' << r.seed << ',' << r.iteration << ','
       << r.exploitability << ',' << r.wall_time_ms << '\n';
  if (!os) throw IoError("write failure on '" + path + "'");
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open results file '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line != "game,method,seed,iteration,exploitability,wall_time_ms")
    throw IoError("results file '" + path + "': bad header");
  std::vector<ResultRow> rows;
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    ResultRow r;
    std::string seed_s, iter_s, e_s, wall_s;
    if (!std::getline(ls, r.game, ',') || !std::getline(ls, r.method, ',') ||
        !std::getline(ls, seed_s, ',') || !std::getline(ls, iter_s, ',') ||
        !std::getline(ls, e_s, ',') || !std::getline(ls, wall_s))
      throw IoError("results file '" + path + "': malformed row at line " +
                    std::to_string(lineno));
    r.seed = std::stoull(seed_s);
    r.iteration = std::stoi(iter_s);
    r.exploitability = std::stod(e_s);
    r.wall_time_ms = std::stol(wall_s);
    if (r.iteration < 1 || r.exploitability < -1e-9)
      throw IoError("results file '" + path + "': invalid row at line " +
                    std::to_string(lineno));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::map<std::string, std::map<std::string, std::vector<std::pair<double, double>>>>
aggregate_means(const std::vector<ResultRow>& rows) {
  // (game, method, iteration) -> (sum, count)
  std::map<std::string, std::map<std::string, std::map<int, std::pair<double, int>>>> acc;
  for (const auto& r : rows) {
    auto& [sum, cnt] = acc[r.game][r.method][r.iteration];
    sum += r.exploitability;
    ++cnt;
  }
  std::map<std::string, std::map<std::string, std::vector<std::pair<double, double>>>> out;
  for (auto& [game, methods] : acc)
    for (auto& [method, iters] : methods) {
      auto& pts = out[game][method];
      pts.reserve(iters.size());
      for (auto& [it, sc] : iters)
        pts.emplace_back(static_cast<double>(it), sc.first / sc.second);
    }
  return out;
}

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
  constexpr int kW = 720, kH = 480, kL = 70, kR = 150, kT = 40, kB = 50;
  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (x > 0) { min_x = std::min(min_x, x); max_x = std::max(max_x, x); }
      if (y > 0) { min_y = std::min(min_y, y); max_y = std::max(max_y, y); }
    }
  if (min_x > max_x) { min_x = 1; max_x = 10; }
  if (min_y > max_y) { min_y = 1e-3; max_y = 1; }
  if (max_x == min_x) max_x = min_x * 10;
  if (max_y == min_y) max_y = min_y * 10;
  const double lx0 = std::log10(min_x), lx1 = std::log10(max_x);
  const double ly0 = std::log10(min_y), ly1 = std::log10(max_y);
  auto px = [&](double x) {
    return kL + (std::log10(std::max(x, min_x)) - lx0) / (lx1 - lx0) * (kW - kL - kR);
  };
  auto py = [&](double y) {
    return kH - kB - (std::log10(std::max(y, min_y)) - ly0) / (ly1 - ly0) * (kH - kT - kB);
  };

  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  os << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n";
  // Axes with decade ticks.
  os << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
     << kH - kB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
     << "\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = px(std::pow(10.0, d));
    os << "<line x1=\"" << x << "\" y1=\"" << kH - kB << "\" x2=\"" << x << "\" y2=\""
       << kH - kB + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kH - kB + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
    const double y = py(std::pow(10.0, d));
    os << "<line x1=\"" << kL - 5 << "\" y1=\"" << y << "\" x2=\"" << kL << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kL - 8 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
  }
  os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (kT + kH - kB) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (kT + kH - kB) / 2 << ")\">" << y_label << "</text>\n";
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    os << std::setprecision(6);
    for (auto [x, y] : series[s].points) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    const double ly = kT + 16.0 * static_cast<double>(s);
    os << "<line x1=\"" << kW - kR + 10 << "\" y1=\"" << ly << "\" x2=\"" << kW - kR + 34
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kW - kR + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
       << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
  if (!os) throw IoError("write failure on '" + path + "'");
}

}  // namespace cfrlab::report
