#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dipole/geometry.hpp"

namespace dipole {

/// Unordered vertex pair with u < v.
struct VertexPair {
  std::size_t u = 0;
  std::size_t v = 0;

  bool operator==(const VertexPair&) const = default;
};

/// A finite point of a Rips persistence diagram together with the edges whose
/// lengths are its coordinates. Degree-0 points are born at 0 with no birth edge.
struct PersistencePoint {
  double birth = 0.0;
  double death = 0.0;
  int degree = 0;
  std::optional<VertexPair> birth_edge;
  VertexPair death_edge;

  double persistence() const noexcept { return death - birth; }
};

/// Finite, positive-persistence points of one homological degree. Essential classes
/// are omitted.
struct PersistenceDiagram {
  int degree = 0;
  std::vector<PersistencePoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Degree-0 diagram: one point (0, w) per positive minimum-spanning-tree edge weight.
PersistenceDiagram rips_h0(const DistanceMatrix& dist);

/// Degree-1 diagram of the Rips 2-skeleton run to the full diameter.
PersistenceDiagram rips_h1(const DistanceMatrix& dist);

/// Diagrams for degrees 0..max_degree (max_degree is 0 or 1), computed from one
/// shared edge ordering.
std::vector<PersistenceDiagram> rips_diagrams(const DistanceMatrix& dist, int max_degree);

}  // namespace dipole
