#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "dipole/matrix.hpp"
#include "dipole/persistence.hpp"

namespace dipole {

/// Marks a point matched to its projection on the diagonal.
inline constexpr std::size_t kDiagonal = std::numeric_limits<std::size_t>::max();

struct MatchedPair {
  std::size_t a = kDiagonal;  // index into the first diagram
  std::size_t b = kDiagonal;  // index into the second diagram

  bool operator==(const MatchedPair&) const = default;
};

/// Optimal partial matching. Every point of both diagrams appears exactly once and
/// no pair is diagonal-to-diagonal. `cost` is the sum of per-pair ground costs (W_p^p).
struct DiagramMatching {
  std::vector<MatchedPair> pairs;
  double cost = 0.0;
  double p = 2.0;
};

/// Minimum-cost perfect assignment on a square cost matrix (shortest augmenting
/// paths with potentials). Returns the column assigned to each row. Ties resolve
/// toward lower column indices.
std::vector<std::size_t> solve_assignment(const Matrix& cost);

/// Euclidean distance from (birth, death) to the diagonal: (death - birth) / sqrt(2).
double diagonal_gap(const PersistencePoint& point);

/// Ground cost ||a - b||_2^p between two diagram points.
double point_cost(const PersistencePoint& a, const PersistencePoint& b, double p);

/// Cost of sending a point to the diagonal: diagonal_gap^p.
double diagonal_cost(const PersistencePoint& point, double p);

/// Exact W_p^p between diagrams of equal degree, with the matching that attains it.
DiagramMatching wasserstein_pp(const PersistenceDiagram& a, const PersistenceDiagram& b,
                               double p = 2.0);

/// W_p (the p-th root of wasserstein_pp's cost).
double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                            double p = 2.0);

/// Sum of ground costs of `match` recomputed from the diagrams. Throws
/// ConsistencyError when the matching is not a valid partial matching of them.
double matching_cost(const PersistenceDiagram& a, const PersistenceDiagram& b,
                     const DiagramMatching& match);

/// Gradient of the matching cost with respect to the (birth, death) coordinates of
/// each point of `variable`; the points of `target` are held fixed. Throws
/// ConsistencyError when `match` does not reproduce its recorded cost within 1e-9.
std::vector<std::array<double, 2>> matching_subgradient(const PersistenceDiagram& target,
                                                        const PersistenceDiagram& variable,
                                                        const DiagramMatching& match);

}  // namespace dipole
