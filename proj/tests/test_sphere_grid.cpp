#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "spheresr/csv.hpp"
#include "spheresr/rng.hpp"
#include "spheresr/sphere_grid.hpp"

using namespace spheresr;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

SpherePoint random_point(Rng& rng) {
  // Area-uniform: phi uniform, cos(theta) uniform.
  return {2.0 * kPi * rng.uniform01(), std::acos(1.0 - 2.0 * rng.uniform01())};
}
}  // namespace

TEST_CASE("geodesic distance basics") {
  const SpherePoint a{0.3, 1.1};
  CHECK(geodesic_distance(a, a) == doctest::Approx(0.0).epsilon(1e-15));

  // North pole to any theta = pi point is antipodal.
  CHECK(geodesic_distance({0.7, 0.0}, {2.1, kPi}) == doctest::Approx(kPi));

  // Orthogonal equatorial directions; cross-checked against the direct
  // Cartesian computation.
  const SpherePoint u{0.0, kPi / 2}, v{kPi / 2, kPi / 2};
  const double direct = std::acos(
      std::clamp(u.unit_vector().dot(v.unit_vector()), -1.0, 1.0));
  CHECK(direct == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(geodesic_distance(u, v) == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("geodesic distance is a metric on random triples") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const SpherePoint a = random_point(rng), b = random_point(rng),
                      c = random_point(rng);
    const double ab = geodesic_distance(a, b);
    const double ba = geodesic_distance(b, a);
    const double ac = geodesic_distance(a, c);
    const double cb = geodesic_distance(c, b);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
    CHECK(ab >= 0.0);
    CHECK(ab <= kPi + 1e-15);
    CHECK(ab <= ac + cb + 1e-10);
  }
}

TEST_CASE("unit vectors have norm one") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial)
    CHECK(std::abs(random_point(rng).unit_vector().norm() - 1.0) < 1e-12);
}

TEST_CASE("build_grid smallest case enumerates the formula") {
  const auto grid = build_grid(2);
  REQUIRE(grid->size() == 3);
  CHECK(grid->point(0).theta == doctest::Approx(0.0));
  CHECK(grid->point(1).phi == doctest::Approx(0.0));
  CHECK(grid->point(1).theta == doctest::Approx(kPi / 2));
  CHECK(grid->point(2).phi == doctest::Approx(kPi));
  CHECK(grid->point(2).theta == doctest::Approx(kPi / 2));
}

TEST_CASE("build_grid point counts") {
  CHECK(build_grid(50)->size() == 2451);  // L*(L-1)+1
  CHECK(build_grid(60)->size() == 3541);
}

TEST_CASE("build_grid rejects L < 2") {
  CHECK_THROWS_AS(build_grid(1), InvalidParameterError);
  CHECK_THROWS_AS(build_grid(0), InvalidParameterError);
}

TEST_CASE("index_of is total and collapses the pole row") {
  const int L = 9;
  const auto grid = build_grid(L);
  for (int q = 0; q < L; ++q) CHECK(grid->index_of(q, 0) == 0);
  for (int q = 0; q < L; ++q)
    for (int p = 0; p < L; ++p) {
      const int idx = grid->index_of(q, p);
      REQUIRE(idx >= 0);
      REQUIRE(idx < grid->size());
      const SpherePoint& x = grid->point(idx);
      CHECK(x.phi == doctest::Approx(p == 0 ? 0.0 : 2.0 * kPi * q / L));
      CHECK(x.theta == doctest::Approx(kPi * p / L));
    }
  CHECK_THROWS_AS(grid->index_of(-1, 0), InvalidParameterError);
  CHECK_THROWS_AS(grid->index_of(0, L), InvalidParameterError);
}

TEST_CASE("stored points are pairwise distinct and re-encode to themselves") {
  const int L = 12;
  const auto grid = build_grid(L);
  for (int q = 0; q < L; ++q)
    for (int p = 0; p < L; ++p) {
      const SpherePoint x{2.0 * kPi * q / L, kPi * p / L};
      CHECK(grid->nearest_index(x) == grid->index_of(q, p));
    }
  for (int i = 0; i + 1 < grid->size(); ++i)
    for (int j = i + 1; j < grid->size(); ++j)
      CHECK(geodesic_distance(grid->point(i), grid->point(j)) > 1e-12);
}

TEST_CASE("min_separation on equatorial triples") {
  const std::vector<SpherePoint> pts{{0.0, kPi / 2}, {kPi / 2, kPi / 2}, {kPi, kPi / 2}};
  CHECK(min_separation(pts) == doctest::Approx(kPi / 2).epsilon(1e-14));

  const std::vector<SpherePoint> dup{{1.0, 2.0}, {1.0, 2.0}};
  CHECK(min_separation(dup) == doctest::Approx(0.0));

  const std::vector<SpherePoint> pole_eq{{0.3, 0.0}, {0.0, kPi / 2}};
  CHECK(min_separation(pole_eq) == doctest::Approx(kPi / 2));

  const std::vector<SpherePoint> single{{0.1, 0.2}};
  CHECK_THROWS_AS(min_separation(single), InvalidParameterError);
}

TEST_CASE("satisfies_separation compares against nu / N") {
  const double nu = 5.0 * kPi / 2.0;
  const std::vector<SpherePoint> pts{{0.0, kPi / 2}, {kPi / 2, kPi / 2}, {kPi, kPi / 2}};
  CHECK(satisfies_separation(pts, nu, 12));       // pi/2 >= 5 pi / 24
  CHECK_FALSE(satisfies_separation(pts, nu, 4));  // pi/2 <  5 pi / 8

  const std::vector<SpherePoint> single{{0.1, 0.2}};
  CHECK(satisfies_separation(single, nu, 3));
  CHECK(satisfies_separation({}, nu, 3));
}

TEST_CASE("rayleigh witness with one cell reduces to the separation condition") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SpherePoint> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(random_point(rng));
    const RayleighParams params{1.5, 1, 6, 10};
    const std::vector<std::vector<SpherePoint>> partition{pts};
    CHECK(verify_rayleigh_witness(partition, params) ==
          satisfies_separation(pts, params.mu, params.N));
  }
}

TEST_CASE("rayleigh witness rejects overlapping cells") {
  const SpherePoint shared{1.0, 1.0};
  const std::vector<std::vector<SpherePoint>> partition{
      {shared, {2.5, 1.9}}, {{0.4, 0.6}, shared}};
  CHECK_FALSE(verify_rayleigh_witness(partition, {0.1, 2, 8, 10}));
}

TEST_CASE("interleaved equatorial combs are regular with r=2 but not separated") {
  // Two cells of equatorial points spaced pi/2 within each cell; the union
  // has pi/4 neighbors, so it fails the same separation the cells satisfy.
  const int N = 12;
  const double mu = 5.0 * kPi;  // mu / N = 5 pi / 12 ~ 1.309
  std::vector<SpherePoint> a, b;
  for (int i = 0; i < 3; ++i) {
    a.push_back({i * kPi / 2, kPi / 2});
    b.push_back({kPi / 4 + i * kPi / 2, kPi / 2});
  }
  const std::vector<std::vector<SpherePoint>> partition{a, b};
  CHECK(verify_rayleigh_witness(partition, {mu, 2, N, 50}));

  std::vector<SpherePoint> all = a;
  all.insert(all.end(), b.begin(), b.end());
  CHECK_FALSE(satisfies_separation(all, mu, N));
}

TEST_CASE("witness needs exactly r cells") {
  const std::vector<std::vector<SpherePoint>> partition{{{0.0, kPi / 2}}};
  CHECK_FALSE(verify_rayleigh_witness(partition, {1.0, 2, 8, 10}));
}

TEST_CASE("greedy coloring diagnostic") {
  const std::vector<SpherePoint> separated{{0.0, kPi / 2}, {kPi, kPi / 2}};
  CHECK(greedy_regularity_bound(separated, 1.0, 4) == 1);

  const std::vector<SpherePoint> twice{{1.0, 1.0}, {1.0, 1.0}};
  CHECK(greedy_regularity_bound(twice, 1.0, 4) == 2);
}

TEST_CASE("grid CSV format") {
  const auto grid = build_grid(4);
  const std::string path = "grid_l4.csv";
  write_grid_csv(*grid, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,q,p,phi,theta");
  int rows = 0;
  std::string first;
  while (std::getline(in, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  CHECK(rows == grid->size());
  CHECK(first == "0,0,0,0,0");  // the pole row, canonical lattice coordinates
  std::remove(path.c_str());
}
