#include "disc_pipeline.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace catmin;

namespace {

Instance load(const std::string& name) {
  return parse_instance(load_json_file(std::string(CATMIN_FIXTURE_DIR) + "/" + name));
}

KeyLemmaOptions quick() {
  KeyLemmaOptions o;
  o.q_samples = 500;
  return o;
}

}  // namespace

TEST_SUITE("disc_pipeline") {
  TEST_CASE("geodesic graph edges follow mesh paths") {
    const auto inst = load("saddle_grid.json");
    const auto g = geodesic_graph(*inst.disc, inst.F);
    const auto D = oracle::mesh_floyd(*inst.disc);
    REQUIRE(g.sample_vertex.size() == inst.F.size());
    for (std::size_t a = 0; a < inst.F.size(); ++a)
      for (std::size_t b = 0; b < inst.F.size(); ++b)
        CHECK(g.length[a][b] == doctest::Approx(D[inst.F[a]][inst.F[b]]).epsilon(1e-9));
    for (std::size_t e = 0; e < g.mesh_path.size(); ++e) {
      const auto& path = g.mesh_path[e];
      REQUIRE(path.size() >= 2);
      CHECK(path.front() == g.mesh_vertex[g.graph.edges[e][0]]);
      CHECK(path.back() == g.mesh_vertex[g.graph.edges[e][1]]);
    }
  }

  TEST_CASE("key lemma on the saddle fixture") {
    const auto inst = load("saddle_grid.json");
    const auto r = run_key_lemma(*inst.disc, inst.F, quick());
    CHECK(r.pass);
    CHECK(r.certificate.valid);
    CHECK(r.cat0.pass);
    CHECK(r.area.isoperimetric);
    CHECK(r.worst_contraction <= 1e-6);
    CHECK(r.worst_boundary_gap <= 1e-6);
    CHECK(r.worst_q_excess <= 1e-6);
    CHECK(r.q_violations.empty());
    CHECK(r.q_sample_count == 500);
  }

  TEST_CASE("key lemma on random saddle discs") {
    for (int seed = 1; seed <= 4; ++seed) {
      std::mt19937_64 rng(seed);
      const auto m = testgen::random_saddle_disc(rng, 5);
      auto F = m.boundary_loop;
      F.push_back(12);
      const auto r = run_key_lemma(m, F, quick());
      CHECK(r.pass);
      CHECK(r.worst_contraction <= 1e-6);
    }
  }

  TEST_CASE("a single point collapses") {
    const auto inst = load("saddle_grid.json");
    const auto r = run_key_lemma(*inst.disc, {12}, quick());
    CHECK(r.one_point);
    CHECK(r.pass);
  }

  TEST_CASE("refining F shrinks the distortion") {
    const auto inst = load("saddle_grid.json");
    const auto& m = *inst.disc;
    std::vector<int> coarse{0, 4, 24, 20};
    std::vector<int> fine = m.boundary_loop;
    fine.push_back(12);
    const auto s = refinement_study(m, {coarse, inst.F, fine}, quick());
    REQUIRE(s.runs.size() == 3);
    REQUIRE(s.steps.size() == 2);
    for (const auto& st : s.steps) {
      CHECK(st.shared >= 4);
      CHECK(std::isfinite(st.distortion));
    }
    CHECK(s.steps[1].distortion < s.steps[0].distortion);
    for (const auto& r : s.runs) CHECK(r.pass);
  }

  TEST_CASE("bad F is rejected") {
    const auto inst = load("saddle_grid.json");
    CHECK_THROWS_AS(run_key_lemma(*inst.disc, {}, quick()), Error);
    CHECK_THROWS_AS(run_key_lemma(*inst.disc, {0, 99}, quick()), Error);
  }
}
