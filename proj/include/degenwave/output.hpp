#pragma once

// CSV and SVG emission. Numbers are written with 17 significant digits so
// identical runs produce byte-identical files.

#include <string>
#include <vector>

#include "degenwave/dense.hpp"

namespace degenwave {

std::string format_number(double x);

struct CsvColumn {
  std::string name;
  const Vector* values;
};

// Columns must have equal length.
std::string csv_text(const std::vector<CsvColumn>& columns);
void write_csv(const std::string& path, const std::vector<CsvColumn>& columns);
void write_text(const std::string& path, const std::string& text);

struct PlotSeries {
  std::string label;
  Vector x;
  Vector y;
};

struct PlotStyle {
  std::string title;
  std::string xlabel = "t";
  std::string ylabel;
  bool loglog = false;
  std::string annotation;
  int width = 720;
  int height = 480;
  // Series longer than this are reduced to a per-column min/max envelope.
  std::size_t max_points = 1500;
};

// Throws std::invalid_argument when there is nothing to draw.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style);
void emit_plot(const std::string& path, const std::vector<PlotSeries>& series,
               const PlotStyle& style);

}  // namespace degenwave
