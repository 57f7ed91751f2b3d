#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dipole/errors.hpp"
#include "dipole/geometry.hpp"
#include "oracles.hpp"

using namespace dipole;

namespace {

PointCloud line_cloud(std::initializer_list<double> xs) {
  Matrix m(xs.size(), 1);
  std::size_t i = 0;
  for (double x : xs) m(i++, 0) = x;
  return PointCloud(std::move(m));
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const NeighborGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : g.edges) out.emplace(e.u, e.v);
  return out;
}

}  // namespace

TEST_CASE("euclidean_distances") {
  SUBCASE("3-4-5 triangle") {
    const auto d = euclidean_distances(PointCloud(Matrix(2, 2, {0, 0, 3, 4})));
    CHECK(d(0, 1) == 5.0);
    CHECK(d(1, 0) == 5.0);
  }
  SUBCASE("single point") {
    const auto d = euclidean_distances(PointCloud(Matrix(1, 3, {1, 2, 3})));
    CHECK(d.size() == 1);
    CHECK(d(0, 0) == 0.0);
  }
  SUBCASE("matches per-pair recomputation") {
    std::mt19937_64 rng(3);
    const auto coords = oracle::uniform_matrix(10, 4, -2, 2, rng);
    const auto d = euclidean_distances(PointCloud(coords));
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) {
        double sq = 0;
        for (std::size_t c = 0; c < 4; ++c) sq += std::pow(coords(i, c) - coords(j, c), 2);
        CHECK(d(i, j) == doctest::Approx(std::sqrt(sq)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("point cloud and distance matrix validation") {
  CHECK_THROWS_AS(PointCloud(Matrix(0, 2)), ValidationError);
  CHECK_THROWS_AS(PointCloud(Matrix(1, 1, {std::nan("")})), ValidationError);
  CHECK_THROWS_AS(DistanceMatrix::from_dense(2, {0, 1, 2, 0}), ValidationError);
  CHECK_THROWS_AS(DistanceMatrix::from_dense(2, {1, 1, 1, 0}), ValidationError);
  CHECK_THROWS_AS(DistanceMatrix::from_dense(2, {0, -1, -1, 0}), ValidationError);
  CHECK_NOTHROW(DistanceMatrix::from_dense(2, {0, 1, 1 + 1e-12, 0}, 1e-9));
}

TEST_CASE("knn_graph") {
  SUBCASE("collinear tie resolves to lower index") {
    const auto g = knn_graph(euclidean_distances(line_cloud({0, 1, 2})), 1);
    CHECK(edge_set(g) == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  }
  SUBCASE("m = n - 1 gives the complete graph") {
    std::mt19937_64 rng(1);
    const auto d = euclidean_distances(PointCloud(oracle::uniform_matrix(6, 2, 0, 1, rng)));
    CHECK(knn_graph(d, 5).edges.size() == 15);
  }
  SUBCASE("matches brute-force neighbor ranks") {
    std::mt19937_64 rng(8);
    const auto d = euclidean_distances(PointCloud(oracle::uniform_matrix(8, 2, 0, 1, rng)));
    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t i = 0; i < 8; ++i) {
      std::vector<std::pair<double, std::size_t>> row;
      for (std::size_t j = 0; j < 8; ++j) {
        if (j != i) row.emplace_back(d(i, j), j);
      }
      std::sort(row.begin(), row.end());
      for (std::size_t r = 0; r < 3; ++r) {
        expected.emplace(std::min(i, row[r].second), std::max(i, row[r].second));
      }
    }
    const auto g = knn_graph(d, 3);
    CHECK(edge_set(g) == expected);
    for (const auto& e : g.edges) CHECK(e.weight == d(e.u, e.v));
  }
  SUBCASE("invariant under relabeling") {
    std::mt19937_64 rng(5);
    const auto coords = oracle::uniform_matrix(9, 2, 0, 1, rng);
    std::vector<std::size_t> perm{4, 2, 8, 0, 7, 1, 6, 3, 5};
    Matrix shuffled(9, 2);
    for (std::size_t i = 0; i < 9; ++i) {
      shuffled(i, 0) = coords(perm[i], 0);
      shuffled(i, 1) = coords(perm[i], 1);
    }
    const auto a = edge_set(knn_graph(euclidean_distances(coords), 2));
    std::set<std::pair<std::size_t, std::size_t>> b;
    for (const auto& [u, v] : edge_set(knn_graph(euclidean_distances(shuffled), 2))) {
      b.emplace(std::min(perm[u], perm[v]), std::max(perm[u], perm[v]));
    }
    CHECK(a == b);
  }
  SUBCASE("range errors") {
    const auto d = euclidean_distances(line_cloud({0, 1, 2}));
    CHECK_THROWS_AS(knn_graph(d, 0), ParameterError);
    CHECK_THROWS_AS(knn_graph(d, 3), ParameterError);
  }
}

TEST_CASE("geodesic_distances") {
  SUBCASE("path graph") {
    NeighborGraph g{3, {{0, 1, 1.0}, {1, 2, 1.0}}};
    CHECK(geodesic_distances(g)(0, 2) == 2.0);
  }
  SUBCASE("complete metric graph returns its weights") {
    std::mt19937_64 rng(2);
    const auto d = euclidean_distances(PointCloud(oracle::uniform_matrix(7, 3, 0, 1, rng)));
    const auto geo = geodesic_distances(knn_graph(d, 6));
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 7; ++j) CHECK(geo(i, j) == doctest::Approx(d(i, j)).epsilon(1e-14));
    }
  }
  SUBCASE("matches Floyd-Warshall, satisfies the triangle inequality, dominates Euclidean") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      std::mt19937_64 rng(seed);
      const auto d = euclidean_distances(PointCloud(oracle::uniform_matrix(10, 2, 0, 1, rng)));
      const auto g = bridge_components(knn_graph(d, 2), d);
      const auto geo = geodesic_distances(g, 2);
      const auto fw = oracle::floyd_warshall(g);
      for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = 0; j < 10; ++j) {
          CHECK(geo(i, j) == doctest::Approx(fw[i * 10 + j]).epsilon(1e-12));
          CHECK(geo(i, j) >= d(i, j) - 1e-12);
          for (std::size_t k = 0; k < 10; ++k) CHECK(geo(i, k) <= geo(i, j) + geo(j, k) + 1e-12);
        }
      }
    }
  }
  SUBCASE("disconnected graph fails loudly unless bridged") {
    const auto d = euclidean_distances(line_cloud({0, 1, 10, 11, 30, 31}));
    const auto g = knn_graph(d, 1);
    try {
      (void)geodesic_distances(g);
      FAIL("expected ConnectivityError");
    } catch (const ConnectivityError& e) {
      CHECK(e.components() == 3);
    }
    const auto bridged = bridge_components(g, d);
    CHECK(bridged.connected());
    CHECK(bridged.edges.size() == 5);
    const auto geo = geodesic_distances(bridged);
    CHECK(geo(0, 5) == doctest::Approx(31.0));
  }
}

TEST_CASE("farthest_point_sample") {
  const auto d = euclidean_distances(line_cloud({0, 1, 10}));
  SUBCASE("exhaustion") {
    CHECK(farthest_point_sample(d, 3, 1) == std::vector<std::size_t>{0, 1, 2});
    CHECK(farthest_point_sample(d, 10, 1) == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("maximin from a fixed start") {
    CHECK(farthest_point_sample_from(d, 2, 0) == std::vector<std::size_t>{0, 2});
  }
  SUBCASE("each step realizes the maximin, deterministic, duplicate-free") {
    std::mt19937_64 rng(12);
    const auto big = euclidean_distances(PointCloud(oracle::uniform_matrix(40, 2, 0, 1, rng)));
    const auto s = farthest_point_sample(big, 15, 99);
    CHECK(s == farthest_point_sample(big, 15, 99));
    CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == s.size());
    for (std::size_t step = 1; step < s.size(); ++step) {
      auto to_set = [&](std::size_t i) {
        double m = 1e300;
        for (std::size_t t = 0; t < step; ++t) m = std::min(m, big(i, s[t]));
        return m;
      };
      const double chosen = to_set(s[step]);
      for (std::size_t i = 0; i < 40; ++i) {
        if (std::find(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(step), i) ==
            s.begin() + static_cast<std::ptrdiff_t>(step)) {
          CHECK(to_set(i) <= chosen);
        }
      }
    }
  }
}

TEST_CASE("restrict") {
  std::mt19937_64 rng(4);
  const auto d = euclidean_distances(PointCloud(oracle::uniform_matrix(6, 2, 0, 1, rng)));
  const std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  CHECK(restrict(d, all) == d);
  const std::vector<std::size_t> one{3};
  CHECK(restrict(d, one).size() == 1);
  CHECK(restrict(d, one)(0, 0) == 0.0);
  const std::vector<std::size_t> sub{5, 1, 3};
  const auto r = restrict(d, sub);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) CHECK(r(a, b) == d(sub[a], sub[b]));
  }
  const std::vector<std::size_t> dup{1, 1};
  const std::vector<std::size_t> oob{6};
  CHECK_THROWS_AS(restrict(d, dup), ParameterError);
  CHECK_THROWS_AS(restrict(d, oob), ParameterError);
}
