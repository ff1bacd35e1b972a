#include "generators.hpp"
#include "metric_core.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace catmin;

namespace {

MappedDisc two_triangles() {
  MappedDisc m;
  m.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  m.boundary_loop = {0, 1, 2, 3};
  for (const auto& v : m.vertices) m.images.push_back(Vec3(v.x(), v.y(), 0.0));
  return m;
}

}  // namespace

TEST_SUITE("metric_core") {
  TEST_CASE("length distances match Floyd-Warshall over the mesh edges") {
    for (int seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      const auto m = testgen::random_grid_disc(rng, 3 + seed % 3, 3 + seed % 4, 2 + seed % 2);
      const auto d = length_pseudometric(m, 1);
      const auto ref = oracle::mesh_floyd(m);
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) CHECK(d(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-12));
    }
  }

  TEST_CASE("refinement never lengthens") {
    std::mt19937_64 rng(7);
    const auto m = testgen::random_grid_disc(rng, 4, 4, 3);
    const auto d1 = length_pseudometric(m, 1), d2 = length_pseudometric(m, 2), d4 = length_pseudometric(m, 4);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) {
        CHECK(d2(i, j) <= d1(i, j) + 1e-12);
        CHECK(d4(i, j) <= d2(i, j) + 1e-12);
      }
  }

  TEST_CASE("flat square diagonal") {
    const auto d = length_pseudometric(two_triangles(), 1);
    CHECK(d(0, 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(d(1, 3) == doctest::Approx(2.0));
    CHECK(verify_pseudometric(d).ok);
  }

  TEST_CASE("connecting pseudometric is exact on small graphs") {
    for (int seed = 0; seed < 15; ++seed) {
      std::mt19937_64 rng(100 + seed);
      const int n = 4 + seed % 8;
      const auto adj = testgen::random_connected_graph(rng, n, 0.2);
      std::vector<Vec> img;
      std::uniform_real_distribution<double> U(-1, 1);
      for (int i = 0; i < n; ++i) img.push_back(Vec2(U(rng), U(rng)));
      const auto r = connecting_pseudometric(adj, img);
      REQUIRE(r.exact);
      const auto ref = oracle::connecting_by_subsets(adj, img);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(r.value(i, j) == ref[i][j]);
    }
  }

  TEST_CASE("connecting bracket contains the exhaustive value beyond the exact limit") {
    std::mt19937_64 rng(5);
    const int n = 16;
    const auto adj = testgen::random_connected_graph(rng, n, 0.15);
    std::vector<Vec> img;
    std::uniform_real_distribution<double> U(-1, 1);
    for (int i = 0; i < n; ++i) img.push_back(Vec3(U(rng), U(rng), U(rng)));
    const auto r = connecting_pseudometric(adj, img);
    CHECK_FALSE(r.exact);
    const auto ref = oracle::connecting_by_subsets(adj, img);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CHECK(r.lower(i, j) <= ref[i][j] + 1e-12);
        CHECK(r.value(i, j) >= ref[i][j] - 1e-12);
      }
  }

  TEST_CASE("intrinsic lies between connecting and length") {
    for (int seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(200 + seed);
      const auto m = testgen::random_grid_disc(rng, 3, 4, 3, 0.3);
      const auto L = length_pseudometric(m, 1);
      const auto I = intrinsic_pseudometric(m, 1e-9, 1);
      const auto C = connecting_pseudometric(m, 1e-9);
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
          CHECK(I(i, j) <= L(i, j) + 1e-9);
          CHECK(I(i, j) >= C.value(i, j) - 1e-9);
        }
    }
  }

  TEST_CASE("collapsed edge gives zero intrinsic distance") {
    auto m = two_triangles();
    m.images[1] = m.images[0];
    const auto I = intrinsic_pseudometric(m, 1e-9, 1);
    CHECK(I(0, 1) == 0.0);
    CHECK(I(1, 2) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("metric quotient merges near-zero pairs") {
    PseudometricMatrix p(3);
    p.set(0, 1, 1e-12);
    p.set(0, 2, 1.0);
    p.set(1, 2, 1.0);
    const auto q = metric_quotient(p, 1e-9);
    CHECK(q.representatives == std::vector<int>{0, 2});
    CHECK(q.class_of[1] == q.class_of[0]);
    CHECK(q.metric(0, 1) == 1.0);
    CHECK(q.triangle_ok);
  }

  TEST_CASE("metric components split at infinite distance") {
    PseudometricMatrix p(4, kInf);
    p.set(0, 1, 1.0);
    p.set(2, 3, 2.0);
    const auto c = metric_components(p);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == std::vector<int>{0, 1});
  }

  TEST_CASE("verify_pseudometric flags triangle violations") {
    PseudometricMatrix p(3);
    p.set(0, 1, 1.0);
    p.set(1, 2, 1.0);
    p.set(0, 2, 3.0);
    const auto c = verify_pseudometric(p);
    CHECK_FALSE(c.ok);
    CHECK(c.worst_triangle_excess == doctest::Approx(1.0));
  }

  TEST_CASE("monotone-light report on a collapsed edge") {
    auto m = two_triangles();
    m.images[3] = m.images[0];
    const auto r = monotone_light_report(m);
    CHECK(r.monotone);
    CHECK(r.light);
    CHECK(r.class_of[3] == r.class_of[0]);
  }

  TEST_CASE("no-bubble check finds a pinched sphere") {
    // 5x5 grid whose ring around the centre maps to one point: removing a
    // small ball there cuts the centre off from the boundary.
    std::mt19937_64 rng(1);
    auto m = testgen::random_grid_disc(rng, 5, 5, 3, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) m.images[i] = Vec3(m.vertices[i].x(), m.vertices[i].y(), 0.0);
    const MappedDisc flat = m;
    for (int v : {6, 7, 8, 11, 13, 16, 17, 18}) m.images[v] = Vec3(0.5, 0.5, 1.0);
    m.images[12] = Vec3(0.5, 0.5, 2.0);
    const auto w = no_bubble_check(m, 0.1);
    REQUIRE(w.size() >= 1);
    CHECK(w.front().component == std::vector<int>{12});
    CHECK(no_bubble_check(flat, 0.1).empty());
  }

  TEST_CASE("invalid discs are rejected") {
    auto m = two_triangles();
    m.triangles[1] = {0, 2, 9};
    CHECK_FALSE(disc_diagnostics(m).empty());
    CHECK_THROWS_AS(length_pseudometric(m, 1), Error);
    CHECK_THROWS_AS(length_pseudometric(two_triangles(), 0), Error);
  }
}
