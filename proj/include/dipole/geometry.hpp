#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dipole/matrix.hpp"

namespace dipole {

/// n points in R^D, stored one point per row. All entries finite, n >= 1, D >= 1.
class PointCloud {
 public:
  explicit PointCloud(Matrix coords);

  std::size_t size() const noexcept { return coords_.rows(); }
  std::size_t dim() const noexcept { return coords_.cols(); }
  const Matrix& coords() const noexcept { return coords_; }
  std::span<const double> point(std::size_t i) const noexcept { return coords_.row(i); }

 private:
  Matrix coords_;
};

/// Symmetric, zero-diagonal, finite and nonnegative n x n matrix.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// All-zero matrix on n points.
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  /// Validates a dense row-major matrix. Entries whose transpose differs by at most
  /// `symmetry_tol` are accepted and the upper triangle is mirrored to the lower one.
  static DistanceMatrix from_dense(std::size_t n, std::vector<double> entries,
                                   double symmetry_tol = 0.0);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);

  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * n_, n_};
  }
  const std::vector<double>& data() const noexcept { return entries_; }

  DistanceMatrix scaled(double factor) const;

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

struct WeightedEdge {
  std::size_t u = 0;  // u < v
  std::size_t v = 0;
  double weight = 0.0;

  bool operator==(const WeightedEdge&) const = default;
};

/// Undirected weighted graph without self-loops. Edges are kept sorted by (u, v).
struct NeighborGraph {
  std::size_t n = 0;
  std::vector<WeightedEdge> edges;

  /// Number of connected components (isolated vertices count as components).
  std::size_t component_count() const;
  bool connected() const { return component_count() <= 1; }
};

DistanceMatrix euclidean_distances(const PointCloud& cloud);
/// Distances between the rows of an arbitrary coordinate matrix.
DistanceMatrix euclidean_distances(const Matrix& coords);

/// Union-symmetrized m-nearest-neighbor graph; neighbor ties go to the lower index.
NeighborGraph knn_graph(const DistanceMatrix& dist, std::size_t m);

/// Pairs at distance <= radius.
NeighborGraph radius_graph(const DistanceMatrix& dist, double radius);

/// Adds the minimum-distance edges of a spanning tree over the components of `graph`,
/// with weights taken from `dist`. Returns the graph unchanged when it is connected.
NeighborGraph bridge_components(const NeighborGraph& graph, const DistanceMatrix& dist);

/// All-pairs shortest paths (Dijkstra from each source).
/// Throws ConnectivityError when the graph has more than one component.
DistanceMatrix geodesic_distances(const NeighborGraph& graph, std::size_t threads = 1);

/// Greedy maximin sample. The first index is drawn uniformly using `seed`.
std::vector<std::size_t> farthest_point_sample(const DistanceMatrix& dist, std::size_t target_size,
                                               std::uint64_t seed);

/// Greedy maximin sample from a fixed first index. Ties go to the lower index.
std::vector<std::size_t> farthest_point_sample_from(const DistanceMatrix& dist,
                                                    std::size_t target_size, std::size_t start);

/// Principal submatrix in subset order.
DistanceMatrix restrict(const DistanceMatrix& dist, std::span<const std::size_t> subset);

}  // namespace dipole
