#pragma once

// Slow, independent reference implementations used only by the test suites.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "dipole/geometry.hpp"
#include "dipole/matrix.hpp"
#include "dipole/persistence.hpp"

namespace dipole::oracle {

using BarList = std::vector<std::pair<double, double>>;

/// Dense Z/2 boundary-matrix reduction of the Rips 2-skeleton, one bar list per
/// degree 0..max_degree, sorted. Finite, positive-persistence bars only. n <= 10.
std::vector<BarList> reduction_oracle(const DistanceMatrix& dist, int max_degree);

/// Minimum W_p^p by enumerating every partial matching. Diagrams of at most 5 points.
double matching_oracle(const PersistenceDiagram& a, const PersistenceDiagram& b, double p);

/// Cubic all-pairs shortest paths; unreachable pairs are +inf.
std::vector<double> floyd_warshall(const NeighborGraph& graph);

/// Edge weights of a minimum spanning tree of the complete graph (Prim), sorted.
std::vector<double> mst_weights(const DistanceMatrix& dist);

/// Sorted (birth, death) pairs of a diagram.
BarList bars(const PersistenceDiagram& diagram);

/// Central difference of f along every entry of x.
Matrix central_difference(const std::function<double(const Matrix&)>& f, const Matrix& x, double h);

/// n x d matrix of independent uniform [lo, hi) entries.
Matrix uniform_matrix(std::size_t n, std::size_t d, double lo, double hi, std::mt19937_64& rng);

/// Smallest gap between any two distinct pairwise distances.
double min_distance_gap(const DistanceMatrix& dist);

/// Random diagram with `count` points, births in [0, 1) and positive persistence.
PersistenceDiagram random_diagram(std::size_t count, int degree, std::mt19937_64& rng);

/// Target metric from a random 3-D cloud plus random d-dimensional coordinates, redrawn
/// until neither metric has two pairwise distances closer than `min_gap`.
struct GradientInstance {
  DistanceMatrix target;
  Matrix coords;
};
GradientInstance gradient_instance(std::size_t n, std::size_t dim, double min_gap,
                                   std::mt19937_64& rng);

/// Flattened critical edges and optimal matchings of every subset's embedded diagrams.
/// The topological loss is smooth wherever this does not change.
std::vector<std::size_t> topology_signature(const Matrix& coords, const DistanceMatrix& target,
                                            const std::vector<std::vector<std::size_t>>& subsets,
                                            int max_degree, double p);

/// Every size-k subset of [0, n) in lexicographic order.
std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k);

}  // namespace dipole::oracle
