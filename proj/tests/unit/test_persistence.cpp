#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "dipole/datasets.hpp"
#include "dipole/errors.hpp"
#include "dipole/persistence.hpp"
#include "oracles.hpp"

using namespace dipole;

namespace {

DistanceMatrix unit_square() {
  return euclidean_distances(Matrix(4, 2, {0, 0, 1, 0, 1, 1, 0, 1}));
}

DistanceMatrix equilateral() {
  return DistanceMatrix::from_dense(3, {0, 1, 1, 1, 0, 1, 1, 1, 0});
}

void check_provenance(const DistanceMatrix& d, const PersistenceDiagram& diagram) {
  for (const auto& p : diagram.points) {
    CHECK(p.degree == diagram.degree);
    CHECK(p.death > p.birth);
    CHECK(d(p.death_edge.u, p.death_edge.v) == p.death);
    if (diagram.degree == 0) {
      CHECK(p.birth == 0.0);
      CHECK_FALSE(p.birth_edge.has_value());
    } else {
      REQUIRE(p.birth_edge.has_value());
      CHECK(d(p.birth_edge->u, p.birth_edge->v) == p.birth);
    }
  }
}

}  // namespace

TEST_CASE("rips_h0") {
  const auto two = rips_h0(DistanceMatrix::from_dense(2, {0, 1, 1, 0}));
  CHECK(oracle::bars(two) == oracle::BarList{{0, 1}});
  CHECK(oracle::bars(rips_h0(equilateral())) == oracle::BarList{{0, 1}, {0, 1}});
  CHECK(rips_h0(DistanceMatrix(1)).empty());

  SUBCASE("deaths are the minimum spanning tree weights") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      const auto d = euclidean_distances(oracle::uniform_matrix(15, 3, 0, 1, rng));
      const auto h0 = rips_h0(d);
      std::vector<double> deaths;
      for (const auto& p : h0.points) deaths.push_back(p.death);
      std::sort(deaths.begin(), deaths.end());
      CHECK(deaths == oracle::mst_weights(d));
      check_provenance(d, h0);
    }
  }
}

TEST_CASE("rips_h1") {
  SUBCASE("unit square") {
    const auto h1 = rips_h1(unit_square());
    REQUIRE(h1.size() == 1);
    CHECK(h1.points[0].birth == 1.0);
    CHECK(h1.points[0].death == doctest::Approx(std::sqrt(2.0)));
    check_provenance(unit_square(), h1);
  }
  SUBCASE("equilateral triangle has no cycle") { CHECK(rips_h1(equilateral()).empty()); }
  SUBCASE("octagon on the unit circle") {
    const auto circle = circle_sample(8, 1.0, 0.0, 0);
    const auto h1 = rips_h1(euclidean_distances(circle.cloud));
    REQUIRE(h1.size() == 1);
    CHECK(h1.points[0].birth == doctest::Approx(2.0 * std::sin(std::numbers::pi / 8)));
  }
}

TEST_CASE("rips_diagrams") {
  const auto square = unit_square();
  CHECK(rips_diagrams(square, 0).size() == 1);
  const auto both = rips_diagrams(square, 1);
  REQUIRE(both.size() == 2);
  CHECK(oracle::bars(both[0]) == oracle::BarList{{0, 1}, {0, 1}, {0, 1}});
  CHECK(oracle::bars(both[0]) == oracle::bars(rips_h0(square)));
  CHECK(oracle::bars(both[1]) == oracle::bars(rips_h1(square)));
  CHECK_THROWS_AS(rips_diagrams(square, 2), ParameterError);
}

TEST_CASE("reduction oracle") {
  const auto two = oracle::reduction_oracle(DistanceMatrix::from_dense(2, {0, 3, 3, 0}), 1);
  CHECK(two[0] == oracle::BarList{{0, 3}});
  const auto sq = oracle::reduction_oracle(unit_square(), 1);
  REQUIRE(sq[1].size() == 1);
  CHECK(sq[1][0].first == 1.0);
  CHECK(sq[1][0].second == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(oracle::reduction_oracle(DistanceMatrix(11), 1), ParameterError);
}

TEST_CASE("rips_diagrams agrees with the reduction oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(2, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    const auto d = euclidean_distances(oracle::uniform_matrix(n, 2, 0, 1, rng));
    const auto fast = rips_diagrams(d, 1);
    const auto slow = oracle::reduction_oracle(d, 1);
    CHECK(oracle::bars(fast[0]) == slow[0]);
    CHECK(oracle::bars(fast[1]) == slow[1]);
    check_provenance(d, fast[0]);
    check_provenance(d, fast[1]);
  }
}

TEST_CASE("agreement on metrics with many ties") {
  // Integer-valued metrics exercise the tie-breaking order.
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto coords = oracle::uniform_matrix(7, 2, 0, 3, rng);
    Matrix grid(7, 2);
    for (std::size_t i = 0; i < grid.data().size(); ++i) grid.data()[i] = std::floor(coords.data()[i]);
    const auto d = euclidean_distances(grid);
    const auto fast = rips_diagrams(d, 1);
    const auto slow = oracle::reduction_oracle(d, 1);
    CHECK(oracle::bars(fast[0]) == slow[0]);
    CHECK(oracle::bars(fast[1]) == slow[1]);
  }
}

TEST_CASE("scale equivariance and permutation invariance") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto coords = oracle::uniform_matrix(12, 2, 0, 1, rng);
    const auto d = euclidean_distances(coords);
    const auto base = rips_diagrams(d, 1);
    const auto scaled = rips_diagrams(d.scaled(2.5), 1);
    for (std::size_t deg = 0; deg < 2; ++deg) {
      REQUIRE(base[deg].size() == scaled[deg].size());
      for (std::size_t q = 0; q < base[deg].size(); ++q) {
        CHECK(scaled[deg].points[q].birth == doctest::Approx(2.5 * base[deg].points[q].birth));
        CHECK(scaled[deg].points[q].death == doctest::Approx(2.5 * base[deg].points[q].death));
        CHECK(scaled[deg].points[q].death_edge == base[deg].points[q].death_edge);
      }
    }

    std::vector<std::size_t> perm(12);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto permuted = rips_diagrams(restrict(d, perm), 1);
    for (std::size_t deg = 0; deg < 2; ++deg) {
      CHECK(oracle::bars(permuted[deg]) == oracle::bars(base[deg]));
    }
  }
}
