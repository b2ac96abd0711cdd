#pragma once

#include <string>
#include <vector>

#include "ogt/harness.hpp"

namespace ogt {

enum class PlotAxis { rounds, grads };

PlotAxis parse_plot_axis(const std::string& text);

/// Loss gaps at or below zero are drawn at this value on the log axis.
inline constexpr double kPlotFloor = 1e-17;

struct PlotSeries {
  std::string label;
  std::vector<IterationRecord> records;
};

/// Static SVG: log-scale loss gap against rounds or gradient evaluations, one
/// polyline per series, legend in argument order. Output depends only on the
/// inputs.
std::string render_svg(const std::vector<PlotSeries>& series, PlotAxis axis);

/// Reads each CSV, labels it by file stem, writes the SVG to `out_path`.
void plot(const std::vector<std::string>& csv_paths, const std::string& out_path, PlotAxis axis);

}  // namespace ogt
