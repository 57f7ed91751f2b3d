#include "dipole/matrix.hpp"

#include <string>

#include "dipole/errors.hpp"

namespace dipole {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ValidationError("matrix data has " + std::to_string(data_.size()) +
                          " entries, expected " + std::to_string(rows * cols));
  }
}

std::vector<double> column_means(const Matrix& m) {
  std::vector<double> means(m.cols(), 0.0);
  if (m.rows() == 0) return means;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) means[c] += row[c];
  }
  for (auto& v : means) v /= static_cast<double>(m.rows());
  return means;
}

void center_columns(Matrix& m) {
  const auto means = column_means(m);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] -= means[c];
  }
}

}  // namespace dipole
