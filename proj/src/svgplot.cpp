#include <ofem/svgplot.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ofem {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    size_t b = cell.find_first_not_of(' ');
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct XySeries {
  std::vector<double> x, y;
};

// pulls two named numeric columns out of a headered CSV file
XySeries read_columns(const std::string& path, const std::string& xcol,
                      const std::string& ycol) {
  std::ifstream in(path);
  if (!in) throw SchemaMismatch("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw SchemaMismatch("empty CSV file: " + path);
  const auto header = split_csv_line(line);
  int xi = -1, yi = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == xcol) xi = static_cast<int>(i);
    if (header[i] == ycol) yi = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0)
    throw SchemaMismatch("CSV " + path + " lacks columns " + xcol + "/" + ycol);

  XySeries s;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) <= std::max(xi, yi))
      throw SchemaMismatch("CSV row with too few cells in " + path);
    char* endx = nullptr;
    char* endy = nullptr;
    const double xv = std::strtod(cells[xi].c_str(), &endx);
    const double yv = std::strtod(cells[yi].c_str(), &endy);
    if (endx == cells[xi].c_str() || endy == cells[yi].c_str())
      throw SchemaMismatch("non-numeric cell in " + path);
    s.x.push_back(xv);
    s.y.push_back(yv);
  }
  if (s.x.empty()) throw SchemaMismatch("CSV has no data rows: " + path);
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// "nice" tick positions covering [lo, hi]
std::vector<double> ticks_for(double lo, double hi) {
  const double span = hi - lo;
  double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
  if (span / step > 8.0) step *= 2.0;
  if (span / step > 8.0) step *= 2.5;
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step)
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

} // namespace

std::optional<PlotKind> parse_plot_kind(const std::string& name) {
  if (name == "os-vs-t") return PlotKind::OsVsT;
  if (name == "os-vs-iter") return PlotKind::OsVsIter;
  if (name == "projected-solution") return PlotKind::ProjectedSolution;
  return std::nullopt;
}

std::string plot_kind_name(PlotKind kind) {
  switch (kind) {
    case PlotKind::OsVsT: return "os-vs-t";
    case PlotKind::OsVsIter: return "os-vs-iter";
    case PlotKind::ProjectedSolution: return "projected-solution";
  }
  return "?";
}

void render_plot(const std::string& csv_path, PlotKind kind,
                 const std::string& svg_path) {
  XySeries s;
  std::string xlabel, ylabel;
  switch (kind) {
    case PlotKind::OsVsT:
      s = read_columns(csv_path, "t", "os");
      xlabel = "t";
      ylabel = "overshoot";
      break;
    case PlotKind::OsVsIter:
      s = read_columns(csv_path, "iter", "overshoot");
      xlabel = "iteration";
      ylabel = "overshoot";
      break;
    case PlotKind::ProjectedSolution:
      s = read_columns(csv_path, "coord", "value");
      xlabel = "coordinate";
      ylabel = "value";
      break;
  }

  double xlo = *std::min_element(s.x.begin(), s.x.end());
  double xhi = *std::max_element(s.x.begin(), s.x.end());
  double ylo = *std::min_element(s.y.begin(), s.y.end());
  double yhi = *std::max_element(s.y.begin(), s.y.end());
  if (xhi - xlo < 1e-300) { xlo -= 0.5; xhi += 0.5; }
  if (yhi - ylo < 1e-300) { ylo -= 0.5; yhi += 0.5; }
  const double xpad = 0.05 * (xhi - xlo), ypad = 0.05 * (yhi - ylo);
  xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;

  const double width = 640, height = 420;
  const double ml = 70, mr = 20, mt = 20, mb = 50; // margins
  auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ylo) / (yhi - ylo) * (height - mt - mb); };

  std::ofstream out(svg_path);
  if (!out) throw std::runtime_error("cannot write SVG file: " + svg_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // axes box
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
      << "\" height=\"" << height - mt - mb
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (double t : ticks_for(xlo, xhi)) {
    const double X = px(t);
    out << "<line x1=\"" << fmt(X) << "\" y1=\"" << height - mb << "\" x2=\""
        << fmt(X) << "\" y2=\"" << height - mb + 5
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(X) << "\" y=\"" << height - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : ticks_for(ylo, yhi)) {
    const double Y = py(t);
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(Y) << "\" x2=\"" << ml
        << "\" y2=\"" << fmt(Y) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(Y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  out << "<text x=\"" << fmt(0.5 * (ml + width - mr)) << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt(0.5 * (mt + height - mb))
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(0.5 * (mt + height - mb)) << ")\">" << ylabel << "</text>\n";

  const bool line = kind != PlotKind::ProjectedSolution;
  const bool markers = kind != PlotKind::OsVsT;
  if (line) {
    out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i)
      out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
    out << "\"/>\n";
  }
  if (markers) {
    for (size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
          << "\" r=\"2.2\" fill=\"#1f4e9c\"/>\n";
  }
  out << "</svg>\n";
}

} // namespace ofem
