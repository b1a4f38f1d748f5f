#pragma once

// CSV and SVG emission for result tables. Both are byte-deterministic for a
// given table.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "bqt/errors.hpp"
#include "bqt/experiment/sweep.hpp"

namespace bqt::experiment {

namespace detail {

inline std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

inline void require_rows(const ResultTable& table) {
  if (table.empty()) throw ValidationError("table", "no rows to write");
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace detail

/// Header line, then one line per row; 17 significant digits, LF endings.
inline std::string to_csv(const ResultTable& table) {
  detail::require_rows(table);
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) throw ValidationError(table.columns[c], "non-finite value in table");
      if (c) out += ',';
      out += detail::fmt("%.17g", row[c]);
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const ResultTable& table, const std::filesystem::path& path) {
  detail::write_file(path, to_csv(table));
}

struct PlotOptions {
  std::string x_column = "t";
  std::string title;
  int width = 720;
  int height = 440;
};

namespace detail {

struct Frame {
  double left = 70, right = 150, top = 40, bottom = 55;
  double width, height;
  double x0, x1, y0, y1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

inline std::pair<double, double> padded_range(double lo, double hi) {
  if (hi - lo < 1e-12) return {lo - 0.5, hi + 0.5};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel,
                        const std::string& title) {
  std::string s;
  const double x_end = f.width - f.right;
  const double y_end = f.height - f.bottom;
  s += "<rect x=\"" + fmt("%.2f", f.left) + "\" y=\"" + fmt("%.2f", f.top) + "\" width=\"" +
       fmt("%.2f", x_end - f.left) + "\" height=\"" + fmt("%.2f", y_end - f.top) +
       "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    const double x = f.px(xv);
    const double y = f.py(yv);
    s += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", y_end) + "\" x2=\"" + fmt("%.2f", x) +
         "\" y2=\"" + fmt("%.2f", y_end + 5) + "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y_end + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + fmt("%.3g", xv) + "</text>\n";
    s += "<line x1=\"" + fmt("%.2f", f.left - 5) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" + fmt("%.2f", f.left) +
         "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + fmt("%.2f", f.left - 8) + "\" y=\"" + fmt("%.2f", y + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt("%.3g", yv) + "</text>\n";
  }
  s += "<text x=\"" + fmt("%.2f", (f.left + x_end) / 2) + "\" y=\"" + fmt("%.2f", f.height - 12) +
       "\" text-anchor=\"middle\" font-size=\"13\">" + xlabel + "</text>\n";
  s += "<text x=\"18\" y=\"" + fmt("%.2f", (f.top + y_end) / 2) + "\" text-anchor=\"middle\" font-size=\"13\" "
       "transform=\"rotate(-90 18 " + fmt("%.2f", (f.top + y_end) / 2) + ")\">" + ylabel + "</text>\n";
  if (!title.empty())
    s += "<text x=\"" + fmt("%.2f", (f.left + x_end) / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         title + "</text>\n";
  return s;
}

inline constexpr std::array<std::string_view, 6> palette = {"#000000", "#d62728", "#ff7f0e",
                                                            "#1f77b4", "#2ca02c", "#9467bd"};

/// Piecewise-linear ramp from dark blue through teal to yellow.
inline std::string ramp(double s) {
  static constexpr std::array<std::array<double, 3>, 4> stops = {
      {{68, 1, 84}, {49, 104, 142}, {53, 183, 121}, {253, 231, 37}}};
  s = std::clamp(s, 0.0, 1.0) * 3.0;
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s), 2);
  const double f = s - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

inline std::string x_label(const std::string& column) { return column == "t_star" ? "t* = t/&#960;" : column; }

}  // namespace detail

/// One polyline per u value. If the table sweeps several time-model
/// parameters, draws one heatmap panel per u instead (x: time, y: parameter).
inline std::string to_svg(const ResultTable& table, const std::string& column, const PlotOptions& opt = {}) {
  using detail::fmt;
  detail::require_rows(table);
  const std::size_t xc = table.column(opt.x_column);
  const std::size_t yc = table.column(column);
  const std::size_t uc = table.column("u");
  const std::size_t pc = 3;  // parameter column

  std::map<double, std::vector<const std::vector<double>*>> by_u;
  std::map<double, int> params;
  for (const auto& row : table.rows) {
    by_u[row[uc]].push_back(&row);
    params[row[pc]] = 0;
  }
  double xmin = table.rows.front()[xc], xmax = xmin, vmin = table.rows.front()[yc], vmax = vmin;
  for (const auto& row : table.rows) {
    xmin = std::min(xmin, row[xc]);
    xmax = std::max(xmax, row[xc]);
    vmin = std::min(vmin, row[yc]);
    vmax = std::max(vmax, row[yc]);
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;

  std::string s;
  if (params.size() <= 1) {
    detail::Frame f{};
    f.width = opt.width;
    f.height = opt.height;
    f.x0 = xmin;
    f.x1 = xmax;
    std::tie(f.y0, f.y1) = detail::padded_range(vmin, vmax);
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
         std::to_string(opt.height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    s += detail::axes(f, detail::x_label(opt.x_column), column, opt.title);
    std::size_t k = 0;
    for (const auto& [u, rows] : by_u) {
      const std::string_view color = detail::palette[k % detail::palette.size()];
      s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < rows.size(); ++i)
        s += (i ? " " : "") + fmt("%.2f", f.px((*rows[i])[xc])) + "," + fmt("%.2f", f.py((*rows[i])[yc]));
      s += "\"/>\n";
      const double ly = f.top + 10 + 18.0 * static_cast<double>(k);
      const double lx = f.width - f.right + 12;
      s += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" + fmt("%.2f", lx + 24) +
           "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"/>\n";
      s += "<text x=\"" + fmt("%.2f", lx + 30) + "\" y=\"" + fmt("%.2f", ly + 4) + "\" font-size=\"12\">u = " +
           fmt("%.3g", u) + "</text>\n";
      ++k;
    }
    s += "</svg>\n";
    return s;
  }

  // heatmap panels
  int idx = 0;
  for (auto& [p, i] : params) i = idx++;
  const double panel_h = opt.height;
  const double total_h = panel_h * static_cast<double>(by_u.size());
  const double pmin = params.begin()->first;
  const double pmax = params.rbegin()->first;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
       fmt("%.0f", total_h) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " + fmt("%.0f", total_h) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  const std::string pname = table.columns[pc];
  const double span = vmax - vmin < 1e-12 ? 1.0 : vmax - vmin;
  std::size_t k = 0;
  for (const auto& [u, rows] : by_u) {
    detail::Frame f{};
    f.width = opt.width;
    f.height = panel_h;
    f.x0 = xmin;
    f.x1 = xmax;
    f.y0 = pmin;
    f.y1 = pmax > pmin ? pmax : pmin + 1.0;
    const double dy = (f.height - f.top - f.bottom) / static_cast<double>(params.size());
    std::map<double, std::vector<const std::vector<double>*>> by_p;
    for (const auto* r : rows) by_p[(*r)[pc]].push_back(r);
    const std::string title = (opt.title.empty() ? column : opt.title) + " (u = " + fmt("%.3g", u) + ")";
    s += "<g transform=\"translate(0," + fmt("%.0f", panel_h * static_cast<double>(k)) + ")\">\n";
    for (const auto& [p, prow] : by_p) {
      const double y_bottom = f.height - f.bottom - dy * static_cast<double>(params.at(p));
      const double dx = (f.width - f.left - f.right) / static_cast<double>(prow.size());
      for (std::size_t i = 0; i < prow.size(); ++i) {
        const double x = f.left + dx * static_cast<double>(i);
        s += "<rect x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y_bottom - dy) + "\" width=\"" +
             fmt("%.2f", dx + 0.3) + "\" height=\"" + fmt("%.2f", dy + 0.3) + "\" shape-rendering=\"crispEdges\" fill=\"" +
             detail::ramp(((*prow[i])[yc] - vmin) / span) + "\"/>\n";
      }
    }
    s += detail::axes(f, detail::x_label(opt.x_column), pname, title);
    // colour bar
    const double bx = f.width - f.right + 20;
    for (int j = 0; j < 20; ++j) {
      const double y = f.height - f.bottom - (f.height - f.top - f.bottom) * (j + 1) / 20.0;
      s += "<rect x=\"" + fmt("%.2f", bx) + "\" y=\"" + fmt("%.2f", y) + "\" width=\"16\" height=\"" +
           fmt("%.2f", (f.height - f.top - f.bottom) / 20.0 + 0.3) + "\" fill=\"" + detail::ramp(j / 19.0) + "\"/>\n";
    }
    s += "<text x=\"" + fmt("%.2f", bx + 22) + "\" y=\"" + fmt("%.2f", f.top + 10) + "\" font-size=\"11\">" +
         fmt("%.3g", vmax) + "</text>\n";
    s += "<text x=\"" + fmt("%.2f", bx + 22) + "\" y=\"" + fmt("%.2f", f.height - f.bottom) + "\" font-size=\"11\">" +
         fmt("%.3g", vmin) + "</text>\n";
    s += "</g>\n";
    ++k;
  }
  s += "</svg>\n";
  return s;
}

inline void write_svg(const ResultTable& table, const std::string& column, const std::filesystem::path& path,
                      const PlotOptions& opt = {}) {
  detail::write_file(path, to_svg(table, column, opt));
}

}  // namespace bqt::experiment
