#include "arnold/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace arnold {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_plot(const CsvTable& table, const PlotSpec& spec) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  const std::vector<double> xs = table.numeric_column(spec.x_column);
  std::vector<std::vector<double>> ys;
  for (const auto& c : spec.y_columns) ys.push_back(table.numeric_column(c));
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (double x : xs) x0 = std::min(x0, x), x1 = std::max(x1, x);
  for (const auto& col : ys)
    for (double y : col)
      if (std::isfinite(y)) y0 = std::min(y0, y), y1 = std::max(y1, y);
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    const double pad = std::max(1e-12, std::abs(y0) * 1e-6);
    y0 -= pad;
    y1 += pad;
  }
  const double L = 70, R = 20, T = 40, B = 50;
  const double W = spec.width, H = spec.height;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
                  std::to_string(spec.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       escape(spec.title) + "</text>\n";
  s += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) + "\" height=\"" +
       num(H - T - B) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double yv = y0 + (y1 - y0) * k / 4.0, xv = x0 + (x1 - x0) * k / 4.0;
    s += "<text x=\"" + num(L - 6) + "\" y=\"" + num(py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label(yv) + "</text>\n";
    s += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(H - B + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + label(xv) + "</text>\n";
  }
  s += "<text x=\"" + num(W / 2) + "\" y=\"" + num(H - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(spec.x_column) + "</text>\n";
  for (std::size_t c = 0; c < ys.size(); ++c) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(ys[c][i])) continue;
      pts += num(px(xs[i])) + "," + num(py(ys[c][i])) + " ";
    }
    const char* col = colors[c % 6];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    s += "<text x=\"" + num(L + 8) + "\" y=\"" + num(T + 16 + 14.0 * c) + "\" fill=\"" + col +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(spec.y_columns[c]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace arnold
