#pragma once

#include <cstddef>
#include <vector>

#include "dipole/geometry.hpp"
#include "dipole/matrix.hpp"

namespace dipole {

/// Embedded coordinates: one point per row, `dim()` columns. All entries finite.
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(Matrix coords);

  std::size_t size() const noexcept { return coords_.rows(); }
  std::size_t dim() const noexcept { return coords_.cols(); }
  const Matrix& coords() const noexcept { return coords_; }
  Matrix& coords() noexcept { return coords_; }

  bool operator==(const Embedding&) const = default;

 private:
  Matrix coords_;
};

/// Classical-MDS Gram matrix B = -1/2 C D^2 C with C the centering matrix.
Matrix double_center(const DistanceMatrix& dist);

struct EigenPairs {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j is the unit eigenvector for values[j]
};

/// The `count` algebraically largest eigenpairs of a symmetric matrix. Each
/// eigenvector's largest-magnitude entry is made positive.
EigenPairs top_eigenpairs(const Matrix& symmetric, std::size_t count);

/// Classical MDS on `dist` (a geodesic matrix for Isomap). Column j of the result is
/// sqrt(max(lambda_j, 0)) * v_j; the output is mean-centered.
Embedding isomap_embed(const DistanceMatrix& dist, std::size_t dim);

}  // namespace dipole
