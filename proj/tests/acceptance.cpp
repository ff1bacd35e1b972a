// Acceptance run: one line per criterion, exit status 1 if any fails.

#include "disc_pipeline.hpp"
#include "field_system.hpp"
#include "generators.hpp"
#include "graph_min.hpp"
#include "io.hpp"
#include "majorization.hpp"
#include "metric_core.hpp"
#include "oracles.hpp"
#include "saddle_pl.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace catmin;

namespace {

std::string fixture(const std::string& name) { return std::string(CATMIN_FIXTURE_DIR) + "/" + name; }

struct Verdict {
  bool ok = true;
  std::string detail;
};

// W discs produced by the key-lemma runs, reused by criteria 6 and 7.
std::vector<PolyhedralDisc> produced;

Verdict ordering_chain() {
  Verdict v;
  double worst = -kInf;
  int inexact = 0;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const int nx = 3 + seed % 4, ny = 3 + (seed / 4) % 3;  // 9 to 30 vertices
    const auto m = testgen::random_grid_disc(rng, nx, ny, 2 + seed % 2);
    const double zero = 1e-9, slack = 1e-9 + zero;
    const auto len = length_pseudometric(m);
    const auto intr = intrinsic_pseudometric(m, zero);
    const auto conn = connecting_pseudometric(m, zero);
    if (!conn.exact) ++inexact;
    const auto& c = conn.exact ? conn.value : conn.lower;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) {
        const double a = intr(i, j) - len(i, j), b = c(i, j) - intr(i, j);
        worst = std::max({worst, std::isnan(a) ? 0.0 : a, std::isnan(b) ? 0.0 : b});
      }
    v.ok = v.ok && worst <= slack;
  }
  std::ostringstream s;
  s << "worst excess " << worst << ", " << inexact << " bracketed";
  v.detail = s.str();
  return v;
}

Verdict connecting_oracle() {
  Verdict v;
  int mismatches = 0;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 11;
    const auto adj = testgen::random_connected_graph(rng, n, 0.3);
    std::vector<Vec> img;
    for (int i = 0; i < n; ++i) img.push_back(Vec(Vec3(N(rng), N(rng), N(rng))));
    if (k % 5 == 0) img[n - 1] = img[0];
    const auto got = connecting_pseudometric(adj, img);
    const auto want = oracle::connecting_by_subsets(adj, img);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (got.value(i, j) != want[i][j] || !got.exact) ++mismatches;
  }
  v.ok = mismatches == 0;
  v.detail = std::to_string(mismatches) + " mismatched entries";
  return v;
}

Verdict relax_certificates() {
  Verdict v;
  double t = 0, res = 0, deficit = 0;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(3000 + seed);
    const auto r = relax(testgen::random_skeleton_graph(rng, 3 + seed % 5, 2 + seed % 2));
    t = std::max(t, r.certificate.worst_t_star);
    res = std::max(res, r.certificate.worst_residual);
    deficit = std::max(deficit, r.certificate.worst_angle_deficit);
    v.ok = v.ok && r.certificate.converged;
  }
  v.ok = v.ok && t <= 1e-8 && res <= 1e-9 && deficit <= 1e-6;
  std::ostringstream s;
  s << "t* " << t << ", residual " << res << ", angle deficit " << deficit;
  v.detail = s.str();
  return v;
}

Verdict gordan() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> dim(1, 3), deg(1, 8);
  std::normal_distribution<double> N;
  int disagree = 0;
  for (int k = 0; k < 1000; ++k) {
    const int d = dim(rng), n = deg(rng);
    std::vector<Vec> u;
    for (int i = 0; i < n; ++i) {
      Vec x(d);
      for (int c = 0; c < d; ++c) x[c] = N(rng);
      u.push_back(x.normalized());
    }
    const bool descent = descent_direction(u).t_star > 1e-9;
    if (descent == oracle::zero_in_hull(u, 1e-9)) ++disagree;
  }
  return {disagree == 0, std::to_string(disagree) + " disagreements"};
}

Verdict key_lemma() {
  Verdict v;
  double contraction = -kInf, q_excess = -kInf;
  long pairs = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(5000 + seed);
    const auto m = seed % 2 ? testgen::random_grid_disc(rng, 5, 5, 3) : testgen::random_saddle_disc(rng, 4 + seed % 3);
    std::vector<int> F = m.boundary_loop;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (rng() % 3 == 0 && std::find(F.begin(), F.end(), static_cast<int>(i)) == F.end())
        F.push_back(static_cast<int>(i));
    KeyLemmaOptions opt;
    opt.seed = seed + 1;
    const auto r = run_key_lemma(m, F, opt);
    const auto D = oracle::mesh_floyd(m);
    for (std::size_t a = 0; a < F.size(); ++a)
      for (std::size_t b = 0; b < F.size(); ++b)
        contraction = std::max(contraction, r.w_distance[a][b] - D[F[a]][F[b]]);
    q_excess = std::max(q_excess, r.worst_q_excess);
    pairs += r.q_sample_count;
    v.ok = v.ok && r.pass && r.q_sample_count == 10000 && r.q_violations.empty();
    produced.push_back(r.disc.w);
  }
  v.ok = v.ok && contraction <= 1e-6 && q_excess <= 1e-6;
  std::ostringstream s;
  s << "contraction " << contraction << ", q excess " << q_excess << " over " << pairs << " pairs";
  v.detail = s.str();
  return v;
}

Verdict cat0() {
  Verdict v;
  int failed = 0;
  for (const auto& w : produced)
    if (!cat0_certificate(w).pass) ++failed;
  auto cone = [](const char* name) {
    const auto inst = parse_instance(load_json_file(fixture(name)));
    return thin_triangle_test(PolyhedralTarget(*inst.polyhedral, 64), 10000, 1);
  };
  const auto good = cone("cone_5pi2.json"), bad = cone("cone_3pi2.json");
  v.ok = !produced.empty() && failed == 0 && !good.violation && bad.violation && bad.worst_margin > 0.0;
  std::ostringstream s;
  s << produced.size() - failed << "/" << produced.size() << " certified, margin 5pi/2 " << good.worst_margin
    << ", 3pi/2 " << bad.worst_margin;
  v.detail = s.str();
  return v;
}

Verdict area_and_nets() {
  Verdict v;
  double area_gap = -kInf, net_ratio = 0.0;
  for (const auto& w : produced) {
    const auto ba = boundary_and_area(w);
    area_gap = std::max(area_gap, ba.area - ba.length * ba.length / (4 * kPi));
    if (ba.length <= 0.0) continue;
    const PolyhedralTarget X(w, 8);
    for (double eps : {ba.length / 10, ba.length / 20}) {
      const auto net = epsilon_net(X, eps);
      net_ratio = std::max(net_ratio, net.size / net.bound);
      v.ok = v.ok && net.size <= net.bound;
    }
  }
  v.ok = v.ok && !produced.empty() && area_gap <= 1e-9;
  std::ostringstream s;
  s << "A - L^2/4pi " << area_gap << ", net size/bound " << net_ratio;
  v.detail = s.str();
  return v;
}

Verdict counterexample() {
  const Json j = load_json_file(fixture("counterexample.json"));
  const auto m = *parse_instance(j).disc;
  const double eps = as_number(j.at("counterexample").at("epsilon"));
  const bool saddle = is_saddle_pl(m, 200).saddle;
  const auto r = shorten_by_rotation(m, eps);
  double increase = -kInf, decrease = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t k = 0; k < m.size(); ++k) {
      increase = std::max(increase, r.after(i, k) - r.before(i, k));
      decrease = std::max(decrease, r.before(i, k) - r.after(i, k));
    }
  double moved = 0.0;
  for (int b : m.boundary_loop) moved = std::max(moved, (r.rotated.images[b] - m.images[b]).norm());
  Verdict v;
  v.ok = saddle && increase <= 1e-9 && decrease >= 1e-4 && moved == 0.0;
  std::ostringstream s;
  s << "saddle " << (saddle ? "yes" : "no") << ", eps " << eps << ", max increase " << increase
    << ", max decrease " << decrease;
  v.detail = s.str();
  return v;
}

Verdict field_convergence() {
  std::vector<double> res;
  double min_lambda = kInf;
  for (int n : {16, 32, 64}) {
    const auto p = hyperbolic_paraboloid_patch(0.5, 1.0 / n);
    const auto s = solve_field_system(p);
    res.push_back(max_interior_norm(p, laplacian(p, s.fields)));
    min_lambda = std::min(min_lambda, s.min_lambda);
  }
  Verdict v;
  v.ok = min_lambda > 0.0;
  std::ostringstream s;
  s << "orders";
  for (std::size_t k = 1; k < res.size(); ++k) {
    const double q = oracle::observed_order(res[k - 1], res[k]);
    v.ok = v.ok && res[k] < res[k - 1] && q >= 1.5 && q <= 2.5;
    s << " " << q;
  }
  s << ", min lambda " << min_lambda;
  v.detail = s.str();
  return v;
}

Verdict energy_minimality() {
  const auto p = hyperbolic_paraboloid_patch(0.5, 1.0 / 64);
  const auto s = solve_field_system(p);
  const auto r = perturbation_evidence(p, s.fields, 100, 10, 0.05);
  Verdict v;
  v.ok = r.trials.size() == 100 && r.min_delta >= -1e-9 && r.convex;
  std::ostringstream o;
  o << "min delta " << r.min_delta << ", min convexity gap " << r.min_convexity_gap;
  v.detail = o.str();
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit;  // seconds
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"pseudometric ordering chain", 30, ordering_chain},
      {"connecting metric oracle", 60, connecting_oracle},
      {"graph minimization certificate", 120, relax_certificates},
      {"Gordan duality", 10, gordan},
      {"key lemma contraction", 120, key_lemma},
      {"CAT(0) certificates", 60, cat0},
      {"isoperimetric and net bounds", 30, area_and_nets},
      {"counterexample reproduction", 30, counterexample},
      {"field system convergence", 120, field_convergence},
      {"energy minimality evidence", 60, energy_minimality},
  };
  int failures = 0, k = 0;
  for (const auto& c : criteria) {
    ++k;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = v.ok && secs < c.limit;
    failures += !ok;
    std::printf("%s %2d %-32s %7.2fs/%.0fs  %s\n", ok ? "PASS" : "FAIL", k, c.name, secs, c.limit,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
