#include "generators.hpp"
#include "graph_min.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace catmin;

namespace {

GraphInTarget square_star(Vec2 centre) {
  GraphInTarget g;
  for (Vec2 p : {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1), centre}) g.points.push_back(p);
  g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 4}, {2, 4}, {3, 4}};
  g.pinned = {true, true, true, true, false};
  g.param = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  return g;
}

std::vector<Vec> random_star(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 3), deg(1, 8);
  std::normal_distribution<double> N;
  const int d = dim(rng), k = deg(rng);
  std::vector<Vec> u;
  for (int i = 0; i < k; ++i) {
    Vec v(d);
    for (int c = 0; c < d; ++c) v[c] = N(rng);
    u.push_back(v.normalized());
  }
  return u;
}

}  // namespace

TEST_SUITE("graph_min") {
  TEST_CASE("descent direction examples") {
    auto dd = descent_direction({Vec2(1, 0)});
    CHECK(dd.t_star == doctest::Approx(1.0));
    REQUIRE(dd.direction);
    CHECK((*dd.direction - Vec2(1, 0)).norm() < 1e-12);
    dd = descent_direction({Vec2(1, 0), Vec2(-1, 0)});
    CHECK(dd.t_star == 0.0);
    CHECK_FALSE(dd.direction);
    dd = descent_direction({Vec2(1, 0), Vec2(0, 1)});
    CHECK(dd.t_star == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(descent_direction({Vec2(2, 0)}), Error);
    CHECK_THROWS_AS(descent_direction({}), Error);
  }

  TEST_CASE("min-norm point of a segment") {
    const Vec z = min_norm_point({Vec2(1, 1), Vec2(1, -1)});
    CHECK((z - Vec2(1, 0)).norm() < 1e-12);
  }

  TEST_CASE("descent verdict agrees with hull membership") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 300; ++k) {
      const auto u = random_star(rng);
      const auto dd = descent_direction(u);
      CHECK((dd.t_star > 1e-9) == !oracle::zero_in_hull(u, 1e-9));
      if (dd.direction)
        for (const Vec& v : u) CHECK(v.dot(*dd.direction) >= dd.t_star - 1e-9);
    }
  }

  TEST_CASE("faces satisfy Euler's formula") {
    const auto g = square_star({0.4, 0.6});
    auto h = g;
    h.rotation = rotation_from_embedding(h);
    const auto f = extract_faces(h);
    CHECK(f.faces.size() == 5);
    CHECK(f.outer >= 0);
    CHECK(f.faces[f.outer].param_area < 0.0);
    CHECK(graph_diagnostics(h).empty());
  }

  TEST_CASE("a centre inside its neighbours' hull is already stationary") {
    const auto r = relax(square_star({0.8, 0.3}));
    CHECK(r.certificate.valid);
    CHECK((r.graph.points[4] - Vec2(0.8, 0.3)).norm() == 0.0);
    REQUIRE(r.certificate.free_vertices.size() == 1);
    CHECK(r.certificate.free_vertices[0].angle_sum == doctest::Approx(kTwoPi));
  }

  TEST_CASE("a lifted free vertex descends into the plane of its neighbours") {
    GraphInTarget g;
    g.points = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0.3, 0.3, 1.0)};
    g.edges = {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}};
    g.pinned = {true, true, true, false};
    const auto r = relax(g);
    CHECK(r.certificate.valid);
    CHECK(std::abs(r.graph.points[3].z()) < 1e-7);
    CHECK(r.total_length.back() < r.total_length.front());
    for (std::size_t k = 1; k < r.total_length.size(); ++k) CHECK(r.total_length[k] <= r.total_length[k - 1]);
  }

  TEST_CASE("relax certifies random skeletons") {
    for (int seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      const auto g = testgen::random_skeleton_graph(rng, 3 + seed % 4, 2 + seed % 2);
      const auto r = relax(g);
      CHECK(r.certificate.converged);
      CHECK(r.certificate.worst_t_star <= 1e-8);
      CHECK(r.certificate.worst_angle_deficit <= 1e-6);
    }
  }

  TEST_CASE("residuals of bent realizations fail the certificate") {
    auto g = square_star({0.5, 0.5});
    g.realizations.assign(g.edges.size(), {});
    g.realizations[4] = {Vec2(0.0, 0.5)};
    const auto c = certify_conditions(g);
    CHECK(c.worst_residual > 0.1);
    CHECK_FALSE(c.valid);
    CHECK(straighten(g).realized_length(4) == doctest::Approx(g.edge_length(4)));
  }

  TEST_CASE("graph diagnostics") {
    auto g = square_star({0.5, 0.5});
    g.pinned.assign(5, false);
    CHECK_FALSE(graph_diagnostics(g).empty());
    CHECK(graph_diagnostics(g, true).empty());
    g = square_star({0.5, 0.5});
    g.edges.push_back({0, 1});
    CHECK_FALSE(graph_diagnostics(g).empty());
    g = square_star({0.5, 0.5});
    g.points.push_back(Vec2(5, 5));
    g.pinned.push_back(true);
    g.param.push_back(Vec2(5, 5));
    CHECK_FALSE(graph_diagnostics(g).empty());  // disconnected
    CHECK_THROWS_AS(relax(g), Error);
  }
}
