#include "io.hpp"
#include "majorization.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace catmin;

namespace {

PolyhedralDisc load_polyhedral(const std::string& name) {
  return *parse_instance(load_json_file(std::string(CATMIN_FIXTURE_DIR) + "/" + name)).polyhedral;
}

GraphInTarget square_star(Vec centre) {
  GraphInTarget g;
  for (Vec p : {Vec(Vec3(0, 0, 0)), Vec(Vec3(1, 0, 0)), Vec(Vec3(1, 1, 0)), Vec(Vec3(0, 1, 0)), centre})
    g.points.push_back(p);
  g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 4}, {2, 4}, {3, 4}};
  g.pinned = {true, true, true, true, false};
  g.param = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  return g;
}

// Flat triangles glued in a chain; consecutive triangles share a vertex or an edge.
PolyhedralDisc random_chain(std::mt19937_64& rng, std::vector<std::array<int, 2>>& edges) {
  std::bernoulli_distribution share_edge(0.5);
  std::vector<std::array<int, 3>> tris{{0, 1, 2}};
  int n = 3;
  const int count = 2 + static_cast<int>(rng() % 5);
  for (int k = 1; k < count; ++k) {
    const auto& t = tris.back();
    if (share_edge(rng)) {
      tris.push_back({t[2], t[1], n});
      n += 1;
    } else {
      tris.push_back({t[2], n, n + 1});
      n += 2;
    }
  }
  edges.clear();
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) edges.push_back({t[k], t[(k + 1) % 3]});
  return disc_from_triangles(n, tris, [](int, int) { return 1.0; });
}

}  // namespace

TEST_SUITE("majorization") {
  TEST_CASE("comparison triangles") {
    const auto t = comparison_triangle(3, 4, 5);
    CHECK(t.area() == doctest::Approx(6.0));
    CHECK(t.angles[0] + t.angles[1] + t.angles[2] == doctest::Approx(kPi));
    CHECK(std::max({t.angles[0], t.angles[1], t.angles[2]}) == doctest::Approx(kPi / 2));
    CHECK_FALSE(t.degenerate);
    CHECK(comparison_triangle(1, 1, 2).degenerate);
    CHECK_THROWS_AS(comparison_triangle(1, 1, 3), Error);
  }

  TEST_CASE("fan angles dominate target angles") {
    const EuclideanSpace E(3);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N;
    for (int k = 0; k < 50; ++k) {
      std::vector<Vec> loop;
      for (int i = 0; i < 5; ++i) loop.push_back(Vec(Vec3(N(rng), N(rng), N(rng))));
      const auto fm = face_majorant(E, loop);
      CHECK(fm.witness_ok);
      for (int i = 0; i < 5; ++i)
        if (!std::isnan(fm.target_angle[i])) CHECK(fm.planar_angle[i] >= fm.target_angle[i] - 1e-9);
    }
  }

  TEST_CASE("gluing the faces of a square star") {
    const auto d = glue_disc(square_star(Vec(Vec3(0.5, 0.5, 0.0))));
    CHECK(d.witness_ok);
    CHECK(d.max_gluing_mismatch < 1e-12);
    CHECK(d.w.triangles.size() == 4);
    CHECK(d.bare_edges.empty());
    CHECK(boundary_and_area(d.w).area == doctest::Approx(1.0));
    const auto c = cat0_certificate(d.w);
    CHECK(c.pass);
    REQUIRE(c.interior_angles.size() == 1);
    CHECK(c.interior_angles[0].second == doctest::Approx(kTwoPi));
  }

  TEST_CASE("cone angles decide the CAT(0) certificate") {
    CHECK(cat0_certificate(load_polyhedral("cone_5pi2.json")).pass);
    const auto c = cat0_certificate(load_polyhedral("cone_3pi2.json"));
    CHECK_FALSE(c.pass);
    CHECK(c.worst_deficit == doctest::Approx(kPi / 2));
    CHECK_FALSE(cat0_certificate(load_polyhedral("cone_five.json")).pass);
  }

  TEST_CASE("vertices joined by a zero-length edge are certified together") {
    // A hexagon of equilateral triangles whose centre is split in two.
    const std::vector<std::array<int, 3>> tris{{6, 0, 1}, {6, 1, 2}, {6, 2, 3}, {6, 3, 7},
                                               {7, 3, 4}, {7, 4, 5}, {7, 5, 0}, {7, 0, 6}};
    const auto w = disc_from_triangles(8, tris, [](int a, int b) { return a >= 6 && b >= 6 ? 0.0 : 1.0; });
    const auto c = cat0_certificate(w);
    REQUIRE(c.merged.size() == 1);
    CHECK(c.merged[0] == std::vector<int>{6, 7});
    REQUIRE(c.interior_angles.size() == 1);
    CHECK(c.interior_angles[0].first == 6);
    CHECK(c.interior_angles[0].second == doctest::Approx(kTwoPi));
    CHECK(c.pass);
  }

  TEST_CASE("boundary length and area of a flat square") {
    const auto w = disc_from_triangles(4, {{0, 1, 2}, {0, 2, 3}}, [](int a, int b) {
      return (a + b) % 2 == 0 ? std::sqrt(2.0) : 1.0;
    });
    const auto ba = boundary_and_area(w);
    CHECK(ba.length == doctest::Approx(4.0));
    CHECK(ba.area == doctest::Approx(1.0));
    CHECK(ba.isoperimetric);
  }

  TEST_CASE("cut vertices match articulation points") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 40; ++k) {
      std::vector<std::array<int, 2>> edges;
      const auto w = random_chain(rng, edges);
      auto expect = oracle::articulation_points(w.num_vertices, edges);
      std::sort(expect.begin(), expect.end());
      const auto r = cut_vertices(w);
      CHECK(r.cut_vertices == expect);
      CHECK(r.blocks.size() == expect.size() + 1);
    }
  }

  TEST_CASE("thin triangles on cones") {
    const auto good = thin_triangle_test(PolyhedralTarget(load_polyhedral("cone_5pi2.json"), 32), 1000, 1);
    CHECK(good.samples == 1000);
    CHECK_FALSE(good.violation);
    const auto bad = thin_triangle_test(PolyhedralTarget(load_polyhedral("cone_3pi2.json"), 32), 1000, 1);
    CHECK(bad.violation);
    CHECK(bad.worst_margin > 0.1);
  }

  TEST_CASE("epsilon nets cover and respect the size bound") {
    const PolyhedralTarget X(load_polyhedral("cone_5pi2.json"), 16);
    const double L = boundary_and_area(X.disc()).length;
    for (double eps : {L / 10, L / 20}) {
      const auto net = epsilon_net(X, eps);
      CHECK(net.size <= net.bound);
      CHECK(net.covering_radius <= eps + X.spacing());
    }
  }
}
