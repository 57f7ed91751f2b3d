#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "dipole/geometry.hpp"
#include "dipole/matrix.hpp"

namespace dipole {

/// A generated cloud together with the intrinsic parameters of each point
/// (one row per point; column meaning depends on the generator).
struct GeneratedCloud {
  PointCloud cloud;
  Matrix parameters;
};

struct SwissRollOptions {
  bool hole = true;
  double noise = 0.0;  // isotropic Gaussian stddev added to the ambient coordinates
};

/// Spiral (t cos t, h, t sin t) with t uniform in [1.5 pi, 4.5 pi] and h uniform in
/// [0, 21]. With `hole`, points whose unrolled coordinates (see swiss_roll_plane) fall
/// strictly inside the disk u^2 + (v - 1)^2 < 25 are rejected and redrawn.
/// Parameter columns: t, h.
GeneratedCloud swiss_roll(std::size_t n, std::uint64_t seed, const SwissRollOptions& options = {});

struct PlanePoint {
  double u;  // arc length along the spiral, measured from the middle of the roll
  double v;  // height, measured from the middle of the roll
};

/// Unrolled coordinates of the swiss-roll parameter (t, h).
PlanePoint swiss_roll_plane(double t, double h);
bool in_swiss_roll_hole(double t, double h);

/// n points at equally spaced angles on a circle, with radial Gaussian noise.
/// Parameter column: angle.
GeneratedCloud circle_sample(std::size_t n, double radius, double noise, std::uint64_t seed);

/// Torus of tube radius r around a center circle of radius R, angles uniform.
/// Parameter columns: the two angles.
GeneratedCloud torus_sample(std::size_t n, double major_radius, double minor_radius,
                            std::uint64_t seed);

/// Comma-separated reals, one row per line; a non-numeric first row is a header.
Matrix load_matrix_csv(const std::string& path);
PointCloud load_cloud(const std::string& path);
/// Square CSV matrix; symmetry is checked to 1e-9.
DistanceMatrix load_distance(const std::string& path);

/// Rows as CSV with 17 significant digits.
std::string matrix_to_csv(const Matrix& m);
std::string distance_to_csv(const DistanceMatrix& d);

}  // namespace dipole
