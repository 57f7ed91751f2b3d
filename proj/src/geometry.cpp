#include "dipole/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "dipole/errors.hpp"
#include "dipole/parallel.hpp"
#include "dipole/union_find.hpp"

namespace dipole {

PointCloud::PointCloud(Matrix coords) : coords_(std::move(coords)) {
  if (coords_.rows() == 0 || coords_.cols() == 0) {
    throw ValidationError("point cloud needs at least one point and one dimension");
  }
  for (double v : coords_.data()) {
    if (!std::isfinite(v)) throw ValidationError("point cloud has a non-finite coordinate");
  }
}

DistanceMatrix DistanceMatrix::from_dense(std::size_t n, std::vector<double> entries,
                                          double symmetry_tol) {
  if (entries.size() != n * n) {
    throw ValidationError("distance matrix needs " + std::to_string(n * n) + " entries, got " +
                          std::to_string(entries.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (entries[i * n + i] != 0.0) {
      throw ValidationError("distance matrix has nonzero diagonal at row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = entries[i * n + j];
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("distance matrix entry (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") is negative or non-finite");
      }
      if (j > i) {
        if (std::abs(v - entries[j * n + i]) > symmetry_tol) {
          throw ValidationError("distance matrix is asymmetric at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
        }
        entries[j * n + i] = v;
      }
    }
  }
  DistanceMatrix out;
  out.n_ = n;
  out.entries_ = std::move(entries);
  return out;
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  entries_[i * n_ + j] = value;
  entries_[j * n_ + i] = value;
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
  DistanceMatrix out = *this;
  for (auto& v : out.entries_) v *= factor;
  return out;
}

std::size_t NeighborGraph::component_count() const {
  UnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.u, e.v);
  return uf.components();
}

DistanceMatrix euclidean_distances(const Matrix& coords) {
  const std::size_t n = coords.rows();
  DistanceMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = coords.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto b = coords.row(j);
      double sq = 0.0;
      for (std::size_t c = 0; c < coords.cols(); ++c) {
        const double diff = a[c] - b[c];
        sq += diff * diff;
      }
      out.set(i, j, std::sqrt(sq));
    }
  }
  return out;
}

DistanceMatrix euclidean_distances(const PointCloud& cloud) {
  return euclidean_distances(cloud.coords());
}

namespace {

NeighborGraph graph_from_pairs(std::size_t n, const std::set<std::pair<std::size_t, std::size_t>>& pairs,
                               const DistanceMatrix& dist) {
  NeighborGraph g;
  g.n = n;
  g.edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) g.edges.push_back({u, v, dist(u, v)});
  return g;
}

}  // namespace

NeighborGraph knn_graph(const DistanceMatrix& dist, std::size_t m) {
  const std::size_t n = dist.size();
  if (m < 1 || m + 1 > n) {
    throw ParameterError("neighbor count " + std::to_string(m) + " outside [1, " +
                         std::to_string(n == 0 ? 0 : n - 1) + "]");
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    auto row = dist.row(i);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return row[a] < row[b] || (row[a] == row[b] && a < b);
                      });
    for (std::size_t r = 0; r < m; ++r) pairs.emplace(std::min(i, order[r]), std::max(i, order[r]));
  }
  return graph_from_pairs(n, pairs, dist);
}

NeighborGraph radius_graph(const DistanceMatrix& dist, double radius) {
  if (!(radius > 0.0)) throw ParameterError("radius must be positive");
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t j = i + 1; j < dist.size(); ++j) {
      if (dist(i, j) <= radius) pairs.emplace(i, j);
    }
  }
  return graph_from_pairs(dist.size(), pairs, dist);
}

NeighborGraph bridge_components(const NeighborGraph& graph, const DistanceMatrix& dist) {
  if (dist.size() != graph.n) throw ValidationError("graph and distance matrix sizes differ");
  UnionFind uf(graph.n);
  for (const auto& e : graph.edges) uf.unite(e.u, e.v);
  if (uf.components() <= 1) return graph;

  // Label components densely, then find the closest pair between every two components.
  std::vector<std::size_t> label(graph.n);
  std::vector<std::size_t> root_label(graph.n, graph.n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < graph.n; ++i) {
    const std::size_t r = uf.find(i);
    if (root_label[r] == graph.n) root_label[r] = count++;
    label[i] = root_label[r];
  }
  struct Bridge {
    double weight;
    std::size_t u, v;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Bridge> best(count * count, Bridge{inf, 0, 0});
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j = i + 1; j < graph.n; ++j) {
      const std::size_t a = std::min(label[i], label[j]);
      const std::size_t b = std::max(label[i], label[j]);
      if (a == b) continue;
      auto& slot = best[a * count + b];
      if (dist(i, j) < slot.weight) slot = {dist(i, j), i, j};
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) candidates.emplace_back(a, b);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](const auto& x, const auto& y) {
    return best[x.first * count + x.second].weight < best[y.first * count + y.second].weight;
  });

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : graph.edges) pairs.emplace(e.u, e.v);
  UnionFind components(count);
  for (const auto& [a, b] : candidates) {
    if (components.unite(a, b)) {
      const auto& br = best[a * count + b];
      pairs.emplace(std::min(br.u, br.v), std::max(br.u, br.v));
    }
  }
  return graph_from_pairs(graph.n, pairs, dist);
}

DistanceMatrix geodesic_distances(const NeighborGraph& graph, std::size_t threads) {
  const std::size_t n = graph.n;
  if (const std::size_t c = graph.component_count(); c > 1) throw ConnectivityError(c);

  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(n);
  for (const auto& e : graph.edges) {
    adjacency[e.u].emplace_back(e.v, e.weight);
    adjacency[e.v].emplace_back(e.u, e.weight);
  }

  std::vector<double> entries(n * n, 0.0);
  parallel_for(n, threads, [&](std::size_t source) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n, inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    best[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > best[u]) continue;
      for (const auto& [v, w] : adjacency[u]) {
        if (d + w < best[v]) {
          best[v] = d + w;
          queue.emplace(best[v], v);
        }
      }
    }
    std::copy(best.begin(), best.end(), entries.begin() + static_cast<std::ptrdiff_t>(source * n));
  });

  // Floating-point path sums may differ by an ulp between the two directions.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::min(entries[i * n + j], entries[j * n + i]);
      entries[i * n + j] = v;
      entries[j * n + i] = v;
    }
  }
  return DistanceMatrix::from_dense(n, std::move(entries));
}

std::vector<std::size_t> farthest_point_sample_from(const DistanceMatrix& dist,
                                                    std::size_t target_size, std::size_t start) {
  const std::size_t n = dist.size();
  if (target_size < 1) throw ParameterError("sample size must be at least 1");
  if (start >= n) throw ParameterError("start index out of range");
  std::vector<std::size_t> selected;
  if (target_size >= n) {
    selected.resize(n);
    for (std::size_t i = 0; i < n; ++i) selected[i] = i;
    return selected;
  }
  selected.reserve(target_size);
  selected.push_back(start);
  std::vector<double> to_selected(dist.row(start).begin(), dist.row(start).end());
  std::vector<bool> taken(n, false);
  taken[start] = true;
  while (selected.size() < target_size) {
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (next == n || to_selected[i] > to_selected[next]) next = i;
    }
    selected.push_back(next);
    taken[next] = true;
    auto row = dist.row(next);
    for (std::size_t i = 0; i < n; ++i) to_selected[i] = std::min(to_selected[i], row[i]);
  }
  return selected;
}

std::vector<std::size_t> farthest_point_sample(const DistanceMatrix& dist, std::size_t target_size,
                                               std::uint64_t seed) {
  if (dist.size() == 0) throw ParameterError("cannot sample from an empty metric space");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, dist.size() - 1);
  return farthest_point_sample_from(dist, target_size, pick(rng));
}

DistanceMatrix restrict(const DistanceMatrix& dist, std::span<const std::size_t> subset) {
  const std::size_t n = dist.size();
  std::vector<bool> seen(n, false);
  for (std::size_t idx : subset) {
    if (idx >= n) throw ParameterError("subset index " + std::to_string(idx) + " out of range");
    if (seen[idx]) throw ParameterError("duplicate subset index " + std::to_string(idx));
    seen[idx] = true;
  }
  DistanceMatrix out(subset.size());
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) out.set(a, b, dist(subset[a], subset[b]));
  }
  return out;
}

}  // namespace dipole
