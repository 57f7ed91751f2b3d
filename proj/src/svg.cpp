#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "dipole/errors.hpp"
#include "dipole/pipeline.hpp"

namespace dipole {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Min-max normalization of one column to [0, 1]; constant columns map to 0.5.
std::vector<double> normalized_column(const Matrix& m, std::size_t c) {
  double lo = m(0, c), hi = m(0, c);
  for (std::size_t r = 1; r < m.rows(); ++r) {
    lo = std::min(lo, m(r, c));
    hi = std::max(hi, m(r, c));
  }
  std::vector<double> out(m.rows(), 0.5);
  if (hi > lo) {
    for (std::size_t r = 0; r < m.rows(); ++r) out[r] = (m(r, c) - lo) / (hi - lo);
  }
  return out;
}

int channel(double unit) { return static_cast<int>(std::lround(255.0 * std::clamp(unit, 0.0, 1.0))); }

}  // namespace

std::string emit_svg(const Matrix& coords, const Matrix& colors) {
  if (coords.cols() < 2) throw ParameterError("SVG scatter needs at least two embedding axes");
  if (!colors.empty() && colors.rows() != coords.rows()) {
    throw ValidationError("color rows do not match point count");
  }
  const std::size_t n = coords.rows();
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = coords(i, 0), y = -coords(i, 1);  // SVG y grows downward
    if (i == 0) {
      xmin = xmax = x;
      ymin = ymax = y;
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double width = std::max(xmax - xmin, 1e-12), height = std::max(ymax - ymin, 1e-12);
  const double mx = 0.05 * width, my = 0.05 * height;
  const double radius = 0.005 * span;

  std::vector<std::vector<double>> channels;
  for (std::size_t c = 0; c < std::min<std::size_t>(colors.cols(), 3); ++c) {
    channels.push_back(normalized_column(colors, c));
  }

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(xmin - mx) + " " +
         num(ymin - my) + " " + num(width + 2 * mx) + " " + num(height + 2 * my) +
         "\" width=\"800\" height=\"" + num(800.0 * (height + 2 * my) / (width + 2 * mx)) + "\">\n";
  out += "<rect x=\"" + num(xmin - mx) + "\" y=\"" + num(ymin - my) + "\" width=\"" +
         num(width + 2 * mx) + "\" height=\"" + num(height + 2 * my) + "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    int r = 40, g = 90, b = 160;
    if (channels.size() == 1) {
      r = channel(channels[0][i]);
      g = 64;
      b = channel(1.0 - channels[0][i]);
    } else if (channels.size() == 2) {
      r = channel(channels[0][i]);
      g = channel(0.5);
      b = channel(channels[1][i]);
    } else if (channels.size() == 3) {
      r = channel(channels[0][i]);
      g = channel(channels[1][i]);
      b = channel(channels[2][i]);
    }
    out += "<circle cx=\"" + num(coords(i, 0)) + "\" cy=\"" + num(-coords(i, 1)) + "\" r=\"" +
           num(radius) + "\" fill=\"rgb(" + std::to_string(r) + "," + std::to_string(g) + "," +
           std::to_string(b) + ")\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dipole
