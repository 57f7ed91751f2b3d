#include "dipole/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "dipole/errors.hpp"
#include "dipole/union_find.hpp"

namespace dipole {
namespace {

// Edges of the complete graph in filtration order: ascending (length, u, v).
class EdgeOrder {
 public:
  explicit EdgeOrder(const DistanceMatrix& dist) : dist_(dist), n_(dist.size()), rank_(n_ * n_, 0) {
    edges_.reserve(n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2);
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = u + 1; v < n_; ++v) edges_.push_back({u, v});
    }
    std::sort(edges_.begin(), edges_.end(), [&](const VertexPair& a, const VertexPair& b) {
      return std::tuple(dist(a.u, a.v), a.u, a.v) < std::tuple(dist(b.u, b.v), b.u, b.v);
    });
    for (std::size_t r = 0; r < edges_.size(); ++r) {
      rank_[edges_[r].u * n_ + edges_[r].v] = r;
      rank_[edges_[r].v * n_ + edges_[r].u] = r;
    }
  }

  std::size_t size() const noexcept { return edges_.size(); }
  const VertexPair& edge(std::size_t r) const noexcept { return edges_[r]; }
  std::size_t rank(std::size_t a, std::size_t b) const noexcept { return rank_[a * n_ + b]; }
  double length(const VertexPair& e) const noexcept { return dist_(e.u, e.v); }
  std::size_t points() const noexcept { return n_; }
  const DistanceMatrix& dist() const noexcept { return dist_; }

 private:
  const DistanceMatrix& dist_;
  std::size_t n_;
  std::vector<VertexPair> edges_;
  std::vector<std::size_t> rank_;
};

struct H0Result {
  PersistenceDiagram diagram;
  std::vector<bool> merges;  // by edge rank: true for spanning-tree edges
};

H0Result compute_h0(const EdgeOrder& order) {
  H0Result out;
  out.diagram.degree = 0;
  out.merges.assign(order.size(), false);
  UnionFind uf(order.points());
  for (std::size_t r = 0; r < order.size() && uf.components() > 1; ++r) {
    const auto& e = order.edge(r);
    if (!uf.unite(e.u, e.v)) continue;
    out.merges[r] = true;
    const double w = order.length(e);
    if (w > 0.0) out.diagram.points.push_back({0.0, w, 0, std::nullopt, e});
  }
  return out;
}

// Triangle {i < j < k} keyed by (filtration value, i, j, k).
struct Triangle {
  double value;
  std::uint32_t i, j, k;

  friend bool operator<(const Triangle& a, const Triangle& b) {
    return std::tie(a.value, a.i, a.j, a.k) < std::tie(b.value, b.i, b.j, b.k);
  }
  friend bool operator==(const Triangle& a, const Triangle& b) {
    return a.i == b.i && a.j == b.j && a.k == b.k;
  }
};

Triangle make_triangle(const DistanceMatrix& d, std::size_t a, std::size_t b, std::size_t c) {
  std::size_t v[3] = {a, b, c};
  std::sort(std::begin(v), std::end(v));
  const double value = std::max({d(v[0], v[1]), d(v[0], v[2]), d(v[1], v[2])});
  return {value, static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1]),
          static_cast<std::uint32_t>(v[2])};
}

// Persistent cohomology in degree 1: coboundary columns of edges are reduced in
// decreasing filtration order, and the pivot of a column is its earliest triangle.
// The resulting (edge, triangle) pairs equal those of the homology reduction.
// Spanning-tree edges are cleared: they are already paired in degree 0.
PersistenceDiagram compute_h1(const EdgeOrder& order, const std::vector<bool>& merges) {
  PersistenceDiagram out;
  out.degree = 1;
  const std::size_t n = order.points();
  if (n < 3) return out;
  const auto& dist = order.dist();

  auto code = [n](const Triangle& t) {
    return (static_cast<std::uint64_t>(t.i) * n + t.j) * n + t.k;
  };

  std::vector<std::vector<Triangle>> reduced;
  std::unordered_map<std::uint64_t, std::size_t> pivot_owner;
  std::vector<Triangle> column, scratch;

  for (std::size_t r = order.size(); r-- > 0;) {
    if (merges[r]) continue;
    const auto& e = order.edge(r);
    column.clear();
    for (std::size_t c = 0; c < n; ++c) {
      if (c != e.u && c != e.v) column.push_back(make_triangle(dist, e.u, e.v, c));
    }
    std::sort(column.begin(), column.end());

    while (!column.empty()) {
      auto it = pivot_owner.find(code(column.front()));
      if (it == pivot_owner.end()) break;
      const auto& other = reduced[it->second];
      scratch.clear();
      std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch));
      column.swap(scratch);
    }
    if (column.empty()) continue;

    const Triangle& pivot = column.front();
    pivot_owner.emplace(code(pivot), reduced.size());
    reduced.push_back(column);

    const double birth = order.length(e);
    const double death = pivot.value;
    if (death > birth) {
      const VertexPair faces[3] = {{pivot.i, pivot.j}, {pivot.i, pivot.k}, {pivot.j, pivot.k}};
      const VertexPair* last = std::max_element(
          std::begin(faces), std::end(faces),
          [&](const VertexPair& a, const VertexPair& b) { return order.rank(a.u, a.v) < order.rank(b.u, b.v); });
      out.points.push_back({birth, death, 1, e, *last});
    }
  }
  // Report in ascending birth order, matching the filtration.
  std::reverse(out.points.begin(), out.points.end());
  return out;
}

}  // namespace

PersistenceDiagram rips_h0(const DistanceMatrix& dist) {
  const EdgeOrder order(dist);
  return compute_h0(order).diagram;
}

PersistenceDiagram rips_h1(const DistanceMatrix& dist) {
  const EdgeOrder order(dist);
  return compute_h1(order, compute_h0(order).merges);
}

std::vector<PersistenceDiagram> rips_diagrams(const DistanceMatrix& dist, int max_degree) {
  if (max_degree < 0 || max_degree > 1) throw ParameterError("max_degree must be 0 or 1");
  const EdgeOrder order(dist);
  auto h0 = compute_h0(order);
  std::vector<PersistenceDiagram> out;
  out.push_back(std::move(h0.diagram));
  if (max_degree >= 1) out.push_back(compute_h1(order, h0.merges));
  return out;
}

}  // namespace dipole
