#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gfb {

/// Minimal deterministic SVG rendering: heatmaps for phase diagrams and
/// polyline charts for sweep curves. Plots are conveniences; the CSV files
/// are the contract.
namespace svg {

std::string heatmap(const Eigen::MatrixXd& values, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels, const std::string& title,
                    const std::string& x_axis, const std::string& y_axis);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string line_chart(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_axis, const std::string& y_axis,
                       bool log_y = false);

}  // namespace svg
}  // namespace gfb
