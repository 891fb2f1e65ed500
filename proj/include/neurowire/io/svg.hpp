#pragma once

#include <string>
#include <vector>

#include "neurowire/simulation.hpp"

namespace neurowire::io {

/// Somas as dots, each cone path as a polyline broken where it wraps across
/// the periodic boundary. Active cones end in a hollow circle, stopped ones
/// in a cross.
std::string render_trajectory_svg(const std::vector<TrajectoryRow>& rows, double half_length,
                                  const std::string& title = {});

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool markers = false;
};

std::string render_line_plot_svg(const std::vector<LineSeries>& series, const LinePlotOptions& options);

}  // namespace neurowire::io
