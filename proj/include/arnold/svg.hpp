#pragma once

// Static SVG line plots rendered from CSV columns.

#include <string>
#include <vector>

#include "arnold/csv.hpp"

namespace arnold {

struct PlotSpec {
  std::string title;
  std::string x_column;
  std::vector<std::string> y_columns;
  int width = 720;
  int height = 420;
};

std::string render_line_plot(const CsvTable& table, const PlotSpec& spec);

}  // namespace arnold
