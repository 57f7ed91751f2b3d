#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "dipole/datasets.hpp"
#include "dipole/errors.hpp"
#include "dipole/persistence.hpp"
#include "oracles.hpp"

using namespace dipole;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dipole_test_datasets";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& content) {
  const auto p = scratch(name);
  std::ofstream(p) << content;
  return p.string();
}

std::vector<double> sorted_persistence(const PersistenceDiagram& d) {
  std::vector<double> out;
  for (const auto& p : d.points) out.push_back(p.death - p.birth);
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

TEST_CASE("swiss_roll") {
  SUBCASE("hole invariant at full scale") {
    const auto roll = swiss_roll(3000, 42);
    CHECK(roll.cloud.size() == 3000);
    CHECK(roll.cloud.dim() == 3);
    for (std::size_t i = 0; i < 3000; ++i) {
      const double t = roll.parameters(i, 0), h = roll.parameters(i, 1);
      CHECK_FALSE(in_swiss_roll_hole(t, h));
      CHECK(t >= 1.5 * std::numbers::pi);
      CHECK(t <= 4.5 * std::numbers::pi);
      CHECK(roll.cloud.coords()(i, 0) == doctest::Approx(t * std::cos(t)));
      CHECK(roll.cloud.coords()(i, 2) == doctest::Approx(t * std::sin(t)));
    }
  }
  SUBCASE("the hole removes a visible patch") {
    const auto full = swiss_roll(2000, 1, {.hole = false});
    std::size_t inside = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
      inside += in_swiss_roll_hole(full.parameters(i, 0), full.parameters(i, 1)) ? 1 : 0;
    }
    // The disk covers about 4% of the unrolled rectangle.
    CHECK(inside > 40);
    CHECK(inside < 150);
  }
  SUBCASE("plane coordinates") {
    const auto mid = swiss_roll_plane(3 * std::numbers::pi, 10.5);
    CHECK(std::abs(mid.v) < 1e-12);
    CHECK(swiss_roll_plane(1.5 * std::numbers::pi, 0).u < -20);
    CHECK(swiss_roll_plane(4.5 * std::numbers::pi, 0).u > 20);
  }
  SUBCASE("deterministic and noisy") {
    CHECK(swiss_roll(200, 7).cloud.coords() == swiss_roll(200, 7).cloud.coords());
    CHECK_FALSE(swiss_roll(200, 7).cloud.coords() == swiss_roll(200, 8).cloud.coords());
    const auto noisy = swiss_roll(200, 7, {.hole = true, .noise = 0.1});
    CHECK(noisy.cloud.coords() == swiss_roll(200, 7, {.hole = true, .noise = 0.1}).cloud.coords());
    CHECK_FALSE(noisy.cloud.coords() == swiss_roll(200, 7).cloud.coords());
  }
}

TEST_CASE("circle_sample") {
  const auto octagon = circle_sample(8, 1.0, 0.0, 0);
  const auto d = euclidean_distances(octagon.cloud);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(d(i, (i + 1) % 8) == doctest::Approx(2 * std::sin(std::numbers::pi / 8)));
  }
  const auto ring = circle_sample(60, 2.0, 0.0, 0);
  const auto pers = sorted_persistence(rips_h1(euclidean_distances(ring.cloud)));
  REQUIRE(pers.size() >= 1);
  CHECK(pers[0] > 1.0);
  for (std::size_t i = 1; i < pers.size(); ++i) CHECK(pers[i] < 0.05 * pers[0]);
  CHECK(circle_sample(30, 1, 0.1, 3).cloud.coords() == circle_sample(30, 1, 0.1, 3).cloud.coords());
  CHECK_THROWS_AS(circle_sample(5, 0, 0, 0), ParameterError);
}

TEST_CASE("torus_sample") {
  const auto torus = torus_sample(400, 2.0, 1.0, 5);
  for (std::size_t i = 0; i < 400; ++i) {
    const auto& c = torus.cloud.coords();
    CHECK(std::abs(c(i, 0)) <= 3.0 + 1e-12);
    CHECK(std::abs(c(i, 1)) <= 3.0 + 1e-12);
    CHECK(std::abs(c(i, 2)) <= 1.0 + 1e-12);
    const double ring = std::hypot(c(i, 0), c(i, 1)) - 2.0;
    CHECK(std::hypot(ring, c(i, 2)) == doctest::Approx(1.0));
  }
  const auto pers = sorted_persistence(rips_h1(euclidean_distances(torus.cloud)));
  REQUIRE(pers.size() >= 3);
  // Longitude and meridian stand clear of the sampling noise.
  CHECK(pers[1] > 1.25 * pers[2]);
  CHECK(torus_sample(50, 3, 1, 2).cloud.coords() == torus_sample(50, 3, 1, 2).cloud.coords());
  CHECK_THROWS_AS(torus_sample(10, 1.0, 1.0, 0), ParameterError);
}

TEST_CASE("CSV loaders") {
  SUBCASE("cloud with and without header") {
    const auto plain = load_cloud(write_file("plain.csv", "1,2,3\n4,5,6\n"));
    CHECK(plain.size() == 2);
    CHECK(plain.dim() == 3);
    CHECK(plain.coords()(1, 2) == 6.0);
    const auto headed = load_cloud(write_file("headed.csv", "x,y\n1.5, -2\r\n\n3e2,4\n"));
    CHECK(headed.size() == 2);
    CHECK(headed.coords()(1, 0) == 300.0);
  }
  SUBCASE("parse errors carry the line number") {
    try {
      (void)load_cloud(write_file("ragged.csv", "1,2\n3,4\n5\n"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(load_cloud(write_file("bad.csv", "1,2\nfoo,4\n")), ParseError);
    CHECK_THROWS_AS(load_cloud(write_file("empty.csv", "")), ParseError);
    CHECK_THROWS_AS(load_cloud(scratch("missing.csv").string()), ValidationError);
  }
  SUBCASE("distance matrix validation") {
    CHECK(load_distance(write_file("ok.csv", "0,1\n1,0\n")).size() == 2);
    CHECK_THROWS_AS(load_distance(write_file("asym.csv", "0,1\n2,0\n")), ValidationError);
    CHECK_THROWS_AS(load_distance(write_file("neg.csv", "0,-1\n-1,0\n")), ValidationError);
    CHECK_THROWS_AS(load_distance(write_file("diag.csv", "1,1\n1,0\n")), ValidationError);
    CHECK_THROWS_AS(load_distance(write_file("rect.csv", "0,1,2\n1,0,3\n")), ValidationError);
  }
  SUBCASE("17-digit round trip is lossless") {
    std::mt19937_64 rng(3);
    auto m = oracle::uniform_matrix(20, 4, -1e3, 1e3, rng);
    m(0, 0) = 1e-300;
    m(0, 1) = std::nextafter(1.0, 2.0);
    m(0, 2) = -0.0;
    CHECK(load_matrix_csv(write_file("round.csv", matrix_to_csv(m))) == m);
    const auto d = euclidean_distances(m);
    CHECK(load_distance(write_file("dround.csv", distance_to_csv(d))) == d);
  }
}
