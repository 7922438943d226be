#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fsv::io {

struct SvgSeries {
  std::string label;
  std::vector<double> values;
  std::string color = "#1f6fb5";
};

// Self-contained SVG line chart. Every series carries its raw values in a
// data-values attribute (full precision) so downstream checks can compare
// the chart against the CSVs it was drawn from.
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<std::string>& dates,
                          const std::vector<SvgSeries>& series);

// Correlation-matrix heatmap (values in [-1,1]) with per-cell data-value
// attributes and numeric cell labels.
void write_heatmap_svg(const std::string& path, const std::string& title,
                       const Eigen::MatrixXd& matrix,
                       const std::vector<std::string>& labels);

}  // namespace fsv::io
