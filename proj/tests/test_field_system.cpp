#include "field_system.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace catmin;

TEST_SUITE("field_system") {
  TEST_CASE("principal frame of the hyperbolic paraboloid at the origin") {
    const auto p = hyperbolic_paraboloid_patch(0.5, 1.0 / 16);
    const auto frame = curvature_frame(p);
    const auto& c = frame[static_cast<std::size_t>(8) * p.nx + 8];
    CHECK(p.param(8, 8).norm() < 1e-12);
    CHECK(c.k1 > 0.0);
    CHECK(c.k2 < 0.0);
    CHECK(c.k1 == doctest::Approx(-c.k2).epsilon(1e-6));
    CHECK(std::abs(c.normal.dot(Vec3::UnitZ())) == doctest::Approx(1.0));
    CHECK(std::abs(c.e1.dot(c.e2)) < 1e-9);
    // Asymptotic directions have zero normal curvature: c.a1 lies along x = +-y.
    CHECK(std::abs(std::abs(c.a1.normalized().x()) - std::abs(c.a1.normalized().y())) < 1e-6);
  }

  TEST_CASE("grid gradient is exact on quadratics") {
    const int n = 6;
    const double h = 0.1;
    std::vector<double> f(n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) f[j * n + i] = (i * h) * (i * h) + 3 * (j * h);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const auto g = grid_gradient(f, n, n, h, i, j);
        CHECK(g[0] == doctest::Approx(2 * i * h));
        CHECK(g[1] == doctest::Approx(3.0));
      }
  }

  TEST_CASE("solved fields are positive, tangent and second order") {
    std::vector<double> residual;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      const auto p = hyperbolic_paraboloid_patch(0.5, h);
      const auto s = solve_field_system(p);
      CHECK(s.min_lambda > 0.0);
      CHECK(s.max_tangency_residual < 1e-10);
      residual.push_back(max_interior_norm(p, laplacian(p, s.fields)));
    }
    for (std::size_t k = 1; k < residual.size(); ++k) {
      const double order = oracle::observed_order(residual[k - 1], residual[k]);
      CHECK(order >= 1.5);
      CHECK(order <= 2.5);
      CHECK(residual[k] < residual[k - 1]);
    }
  }

  TEST_CASE("perturbations do not lower the energy") {
    const auto p = hyperbolic_paraboloid_patch(0.5, 1.0 / 32);
    const auto s = solve_field_system(p);
    const auto r = perturbation_evidence(p, s.fields, 30, 4, 0.05);
    CHECK(r.trials.size() == 30);
    CHECK(r.base_energy == doctest::Approx(energy(p, s.fields)));
    CHECK(r.no_decrease);
    CHECK(r.convex);
    CHECK(r.min_delta >= -1e-9);
  }

  TEST_CASE("patch diagnostics") {
    HeightFieldPatch p;
    p.nx = 2;
    p.ny = 3;
    p.h = -1;
    CHECK_FALSE(patch_diagnostics(p).empty());
    CHECK_THROWS_AS(solve_field_system(p), Error);
    CHECK(patch_diagnostics(hyperbolic_paraboloid_patch(0.5, 0.125)).empty());
  }
}
