#include "generators.hpp"
#include "io.hpp"
#include "saddle_pl.hpp"

#include <doctest.h>

#include <queue>

using namespace catmin;

namespace {

MappedDisc graph_of(std::mt19937_64& rng, int n, double (*f)(double, double)) {
  MappedDisc m = testgen::random_grid_disc(rng, n, n, 3, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = 2.0 * m.vertices[i].x() - 1.0, y = 2.0 * m.vertices[i].y() - 1.0;
    m.images[i] = Vec3(x, y, f(x, y));
  }
  return m;
}

double dome(double x, double y) { return 1.0 - x * x - y * y; }
double saddle(double x, double y) { return x * x - y * y; }

// Vertices strictly on `side` of the plane reachable from v without crossing it.
std::vector<int> flood(const MappedDisc& m, const Plane& p, int side, int v) {
  std::vector<bool> seen(m.size(), false);
  std::vector<int> out;
  std::queue<int> q;
  auto on_side = [&](int i) {
    const double g = p.normal.dot(Vec3(m.images[i].head<3>())) - p.offset;
    return side > 0 ? g > 0 : g < 0;
  };
  q.push(v);
  seen[v] = true;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    out.push_back(u);
    for (const auto& t : m.triangles)
      if (std::find(t.begin(), t.end(), u) != t.end())
        for (int w : t)
          if (!seen[w] && on_side(w)) {
            seen[w] = true;
            q.push(w);
          }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("saddle") {
  TEST_CASE("a dome is not a saddle") {
    std::mt19937_64 rng(2);
    const auto m = graph_of(rng, 5, dome);
    const auto v = is_saddle_pl(m);
    CHECK_FALSE(v.saddle);
    REQUIRE(v.witness);
    REQUIRE_FALSE(v.component.empty());
    const auto boundary = boundary_mask(m);
    for (int i : v.component) CHECK_FALSE(boundary[i]);
    if (v.zero_rule == 0) CHECK(flood(m, *v.witness, v.side, v.component.front()) == v.component);
    CHECK(enclosed_component(m, *v.witness, v.side, v.zero_rule) == v.component);
  }

  TEST_CASE("the hyperbolic paraboloid is a saddle") {
    std::mt19937_64 rng(2);
    const auto m = graph_of(rng, 5, saddle);
    const auto v = is_saddle_pl(m, 100);
    CHECK(v.saddle);
    CHECK(v.planes_tested > 100);
    CHECK_FALSE(v.witness);
  }

  TEST_CASE("the verdict is invariant under rigid motions") {
    std::mt19937_64 rng(8);
    const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    for (auto f : {dome, saddle}) {
      auto m = graph_of(rng, 4, f);
      const auto before = is_saddle_pl(m, 50, 3);
      for (auto& x : m.images) x = R * Vec3(x.head<3>()) + Vec3(0.5, -1, 2);
      const auto after = is_saddle_pl(m, 50, 3);
      CHECK(before.saddle == after.saddle);
      CHECK(before.planes_tested == after.planes_tested);
    }
  }

  TEST_CASE("wrong dimension is rejected") {
    std::mt19937_64 rng(1);
    const auto m = testgen::random_grid_disc(rng, 3, 3, 2);
    CHECK_THROWS_AS(is_saddle_pl(m), Error);
  }

  TEST_CASE("the rotated hexagon is a saddle whose rotation shortens") {
    const auto search = search_hexagon_parameters(50, 1);
    CHECK(search.feasible >= 1);
    CHECK(search.candidates >= search.feasible);
    const auto m = hexagon_counterexample(search.params);
    CHECK(is_saddle_pl(m, 200).saddle);
    CHECK(search.epsilon > 0.0);
    CHECK(search.epsilon <= rotation_range(m));
    const auto r = shorten_by_rotation(m, search.epsilon);
    CHECK(r.boundary_unchanged);
    CHECK(r.pareto);
    CHECK(r.max_increase <= 1e-9);
    CHECK(r.max_decrease > 1e-6);
    CHECK(is_saddle_pl(r.rotated, 200).saddle);
  }

  TEST_CASE("bad hexagon parameters") {
    HexagonParams p;
    p.rho = -1;
    CHECK_THROWS_AS(hexagon_counterexample(p), Error);
  }
}
