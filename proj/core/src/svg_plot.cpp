#include "ogt/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ogt/csv.hpp"
#include "ogt/errors.hpp"

namespace ogt {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double x_value(const IterationRecord& r, PlotAxis axis) {
  return axis == PlotAxis::rounds ? static_cast<double>(r.k) : static_cast<double>(r.grad_evals);
}

double y_value(const IterationRecord& r) { return std::log10(std::max(r.loss_gap, kPlotFloor)); }

}  // namespace

PlotAxis parse_plot_axis(const std::string& text) {
  if (text == "rounds") return PlotAxis::rounds;
  if (text == "grads") return PlotAxis::grads;
  throw ConfigError("unknown plot axis '" + text + "' (expected rounds or grads)");
}

std::string render_svg(const std::vector<PlotSeries>& series, PlotAxis axis) {
  double x_max = 1.0;
  double y_lo = 0.0, y_hi = 0.0;
  bool any = false;
  for (const auto& s : series) {
    for (const auto& r : s.records) {
      x_max = std::max(x_max, x_value(r, axis));
      const double y = y_value(r);
      if (!any) {
        y_lo = y_hi = y;
        any = true;
      }
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi);
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * x / x_max; };
  auto py = [&](double y) { return kTop + ph * (y_hi - y) / (y_hi - y_lo); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
      << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade ticks on the log axis, at most ~10 labels.
  const int span = static_cast<int>(y_hi - y_lo);
  const int stride = std::max(1, (span + 9) / 10);
  for (int e = static_cast<int>(y_lo); e <= static_cast<int>(y_hi); e += stride) {
    const double y = py(e);
    out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_max * t / 4.0;
    const double x = px(xv);
    char label[32];
    std::snprintf(label, sizeof label, "%.0f", xv);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
        << label << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" font-size=\"13\" text-anchor=\"middle\">"
      << (axis == PlotAxis::rounds ? "communication rounds" : "gradient evaluations") << "</text>\n";
  out << "<text x=\"15\" y=\"" << num(kTop + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << num(kTop + ph / 2) << ")\">loss gap</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : series[i].records) {
      out << (first ? "" : " ") << num(px(x_value(r, axis))) << ',' << num(py(y_value(r)));
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 15.0 + 18.0 * static_cast<double>(i);
    const double lx = kLeft + pw + 12.0;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20) << "\" y2=\"" << num(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
        << escape(series[i].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void plot(const std::vector<std::string>& csv_paths, const std::string& out_path, PlotAxis axis) {
  std::vector<PlotSeries> series;
  for (const auto& path : csv_paths)
    series.push_back({std::filesystem::path(path).stem().string(), load_csv(path)});
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << render_svg(series, axis);
}

}  // namespace ogt
