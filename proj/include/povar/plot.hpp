#pragma once
// Minimal static SVG rendering for sweep outputs: scatter plots (optionally
// log-log) and a heatmap. No external dependencies, fixed 720x480 canvas.

#include <string>
#include <utility>
#include <vector>

namespace povar {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

void svg_scatter(const std::string& path, const std::string& title,
                 const std::vector<PlotSeries>& series, bool log_x, bool log_y);

// values[iy][ix] colored on a log scale; NaN cells stay white.
void svg_heatmap(const std::string& path, const std::string& title,
                 const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<std::vector<double>>& values);

}  // namespace povar
