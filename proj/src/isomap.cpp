#include "dipole/isomap.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "dipole/errors.hpp"

namespace dipole {

Embedding::Embedding(Matrix coords) : coords_(std::move(coords)) {
  if (coords_.cols() == 0) throw ValidationError("embedding dimension must be at least 1");
  for (double v : coords_.data()) {
    if (!std::isfinite(v)) throw ValidationError("embedding has a non-finite coordinate");
  }
}

Matrix double_center(const DistanceMatrix& dist) {
  const std::size_t n = dist.size();
  Matrix b(n, n);
  if (n == 0) return b;
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += dist(i, j) * dist(i, j);
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (dist(i, j) * dist(i, j) - row_mean[i] - row_mean[j] + grand);
    }
  }
  return b;
}

EigenPairs top_eigenpairs(const Matrix& symmetric, std::size_t count) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw ValidationError("eigen solver needs a square matrix");
  if (count > n) {
    throw ParameterError("requested " + std::to_string(count) + " eigenpairs of a " +
                         std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
      symmetric.data().data(), dim, dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }

  EigenPairs out;
  out.values.resize(count);
  out.vectors = Matrix(n, count);
  for (std::size_t j = 0; j < count; ++j) {
    // Eigen orders eigenvalues ascending.
    const Eigen::Index col = dim - 1 - static_cast<Eigen::Index>(j);
    out.values[j] = solver.eigenvalues()(col);
    auto v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < dim; ++i) {
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    }
    const double sign = v(arg) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = sign * v(static_cast<Eigen::Index>(i));
  }
  return out;
}

Embedding isomap_embed(const DistanceMatrix& dist, std::size_t dim) {
  const std::size_t n = dist.size();
  if (dim < 1 || dim + 1 > n) {
    throw ParameterError("target dimension " + std::to_string(dim) + " outside [1, " +
                         std::to_string(n == 0 ? 0 : n - 1) + "]");
  }
  const auto pairs = top_eigenpairs(double_center(dist), dim);
  Matrix coords(n, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double scale = std::sqrt(std::max(pairs.values[j], 0.0));
    for (std::size_t i = 0; i < n; ++i) coords(i, j) = scale * pairs.vectors(i, j);
  }
  center_columns(coords);
  return Embedding(std::move(coords));
}

}  // namespace dipole
