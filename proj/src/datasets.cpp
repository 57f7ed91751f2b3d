#include "dipole/datasets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>
#include <vector>

#include "dipole/errors.hpp"

namespace dipole {
namespace {

constexpr double kRollStart = 1.5 * std::numbers::pi;
constexpr double kRollEnd = 4.5 * std::numbers::pi;
constexpr double kRollHeight = 21.0;

// Arc length of the spiral r = t from 0 to t.
double spiral_arc_length(double t) {
  return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                        : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, ptr);
}

}  // namespace

PlanePoint swiss_roll_plane(double t, double h) {
  static const double middle = 0.5 * (spiral_arc_length(kRollStart) + spiral_arc_length(kRollEnd));
  return {spiral_arc_length(t) - middle, h - 0.5 * kRollHeight};
}

bool in_swiss_roll_hole(double t, double h) {
  const auto p = swiss_roll_plane(t, h);
  return p.u * p.u + (p.v - 1.0) * (p.v - 1.0) < 25.0;
}

GeneratedCloud swiss_roll(std::size_t n, std::uint64_t seed, const SwissRollOptions& options) {
  if (n < 1) throw ParameterError("swiss roll needs at least one point");
  if (!(options.noise >= 0.0)) throw ParameterError("noise must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix coords(n, 3), params(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    double t, h;
    do {
      t = kRollStart + (kRollEnd - kRollStart) * unit(rng);
      h = kRollHeight * unit(rng);
    } while (options.hole && in_swiss_roll_hole(t, h));
    coords(i, 0) = t * std::cos(t);
    coords(i, 1) = h;
    coords(i, 2) = t * std::sin(t);
    if (options.noise > 0.0) {
      for (std::size_t c = 0; c < 3; ++c) coords(i, c) += options.noise * gauss(rng);
    }
    params(i, 0) = t;
    params(i, 1) = h;
  }
  return {PointCloud(std::move(coords)), std::move(params)};
}

GeneratedCloud circle_sample(std::size_t n, double radius, double noise, std::uint64_t seed) {
  if (n < 1) throw ParameterError("circle needs at least one point");
  if (!(radius > 0.0)) throw ParameterError("circle radius must be positive");
  if (!(noise >= 0.0)) throw ParameterError("noise must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix coords(n, 2), params(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    const double r = noise > 0.0 ? radius + noise * gauss(rng) : radius;
    coords(i, 0) = r * std::cos(angle);
    coords(i, 1) = r * std::sin(angle);
    params(i, 0) = angle;
  }
  return {PointCloud(std::move(coords)), std::move(params)};
}

GeneratedCloud torus_sample(std::size_t n, double major_radius, double minor_radius,
                            std::uint64_t seed) {
  if (n < 1) throw ParameterError("torus needs at least one point");
  if (!(minor_radius > 0.0 && major_radius > minor_radius)) {
    throw ParameterError("torus radii must satisfy R > r > 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Matrix coords(n, 3), params(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = angle(rng);
    const double phi = angle(rng);
    const double ring = major_radius + minor_radius * std::cos(phi);
    coords(i, 0) = ring * std::cos(theta);
    coords(i, 1) = ring * std::sin(theta);
    coords(i, 2) = minor_radius * std::sin(phi);
    params(i, 0) = theta;
    params(i, 1) = phi;
  }
  return {PointCloud(std::move(coords)), std::move(params)};
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      double v;
      if (!parse_double(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows == 0 && cols == 0) {
        cols = fields.size();  // header
        continue;
      }
      throw ParseError(path, line_no, "non-numeric field");
    }
    if (cols == 0) cols = row.size();
    if (row.size() != cols) {
      throw ParseError(path, line_no,
                       "expected " + std::to_string(cols) + " fields, got " + std::to_string(row.size()));
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw ParseError(path, line_no, "non-finite value");
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw ParseError(path, line_no, "no data rows");
  return Matrix(rows, cols, std::move(values));
}

PointCloud load_cloud(const std::string& path) { return PointCloud(load_matrix_csv(path)); }

DistanceMatrix load_distance(const std::string& path) {
  Matrix m = load_matrix_csv(path);
  if (m.rows() != m.cols()) {
    throw ValidationError(path + ": distance matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
  const std::size_t n = m.rows();
  return DistanceMatrix::from_dense(n, std::move(m.data()), 1e-9);
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      append_number(out, row[c]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string distance_to_csv(const DistanceMatrix& d) {
  return matrix_to_csv(Matrix(d.size(), d.size(), d.data()));
}

}  // namespace dipole
