#pragma once

//
// Minimal static-SVG line/scatter plots for the experiment CSV outputs.
// No external renderer: the SVG is assembled by hand with fixed axes.
//

#include <optional>
#include <stdexcept>
#include <string>

namespace ofem {

// thrown when a CSV file does not carry the columns a plot kind needs
// (or has no data rows at all)
struct SchemaMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PlotKind {
  OsVsT,             // overshoot against the cut position, line
  OsVsIter,          // overshoot against adaptive iteration, line + markers
  ProjectedSolution, // solution values against a 1D coordinate, scatter
};

std::optional<PlotKind> parse_plot_kind(const std::string& name);
std::string plot_kind_name(PlotKind kind);

// reads csv_path, picks the columns the kind expects, writes a static SVG
void render_plot(const std::string& csv_path, PlotKind kind,
                 const std::string& svg_path);

} // namespace ofem
