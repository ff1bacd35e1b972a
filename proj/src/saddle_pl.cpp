#include "saddle_pl.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace catmin {

namespace {

std::vector<int> vertex_signs(const MappedDisc& m, const Plane& plane, int zero_rule) {
  std::vector<double> g(m.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    g[i] = plane.normal.dot(Vec3(m.images[i].head<3>())) - plane.offset;
    scale = std::max(scale, std::abs(g[i]));
  }
  const double zero = 1e-12 * std::max(1.0, scale);
  std::vector<int> sign(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    sign[i] = g[i] > zero ? 1 : g[i] < -zero ? -1 : zero_rule;
  return sign;
}

std::optional<std::vector<int>> enclosed(const Adjacency& adj, const std::vector<bool>& boundary,
                                         const std::vector<int>& sign, int side) {
  const int n = static_cast<int>(adj.size());
  std::vector<bool> seen(n, false);
  for (int s = 0; s < n; ++s) {
    if (sign[s] != side || seen[s]) continue;
    std::vector<int> comp, stack{s};
    seen[s] = true;
    bool hits = false;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      hits = hits || boundary[u];
      for (int w : adj[u])
        if (sign[w] == side && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    if (!hits) {
      std::sort(comp.begin(), comp.end());
      return comp;
    }
  }
  return std::nullopt;
}

Vec3 img3(const MappedDisc& m, int i) { return m.images[i].head<3>(); }

}  // namespace

std::optional<std::vector<int>> enclosed_component(const MappedDisc& m, const Plane& plane, int side,
                                                   int zero_rule) {
  require_valid_disc(m);
  if (m.dimension() != 3) fail_input("enclosed_component: images must be in 3-space");
  return enclosed(mesh_adjacency(m), boundary_mask(m), vertex_signs(m, plane, zero_rule), side);
}

SaddleVerdict is_saddle_pl(const MappedDisc& m, int extra_planes, std::uint64_t seed) {
  require_valid_disc(m);
  if (m.dimension() != 3) fail_input("is_saddle_pl: images must be in 3-space");
  if (extra_planes < 0) fail_input("is_saddle_pl: extra_planes must be >= 0");
  const int n = static_cast<int>(m.size());
  const auto adj = mesh_adjacency(m);
  const auto boundary = boundary_mask(m);
  double diam = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diam = std::max(diam, (img3(m, i) - img3(m, j)).norm());
  const double degenerate = 1e-12 * std::max(1.0, diam * diam);

  SaddleVerdict v;
  auto test = [&](const Plane& plane) {
    ++v.planes_tested;
    for (int rule : {0, 1, -1}) {
      const auto sign = vertex_signs(m, plane, rule);
      for (int side : {1, -1})
        if (auto comp = enclosed(adj, boundary, sign, side)) {
          v.saddle = false;
          v.witness = plane;
          v.side = side;
          v.zero_rule = rule;
          v.component = std::move(*comp);
          return false;
        }
    }
    return true;
  };

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const Vec3 normal = (img3(m, b) - img3(m, a)).cross(img3(m, c) - img3(m, a));
        if (normal.norm() <= degenerate) continue;
        if (!test({normal, normal.dot(img3(m, a))})) return v;
      }
  // Extra planes built from the images only, so that the verdict commutes
  // with rigid motions for a fixed seed.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::exponential_distribution<double> weight(1.0);
  for (int k = 0; k < extra_planes; ++k) {
    const int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) total += (x = weight(rng));
    const Vec3 normal = (img3(m, a) - img3(m, b)).cross(img3(m, c) - img3(m, d));
    if (normal.norm() <= degenerate) continue;
    Vec3 point = Vec3::Zero();
    for (int i = 0; i < n; ++i) point += (w[i] / total) * img3(m, i);
    if (!test({normal, normal.dot(point)})) return v;
  }
  return v;
}

MappedDisc hexagon_counterexample(const HexagonParams& p) {
  if (!(p.radius > 0.0) || !(p.rho > 0.0) || !std::isfinite(p.phi + p.zeta + p.tau))
    fail_input("hexagon_counterexample: parameters outside the feasible range");
  MappedDisc m;
  const double third = kTwoPi / 3.0;
  for (int j = 0; j < 6; ++j) {
    const double ang = kPi / 3.0 * j;
    m.vertices.emplace_back(std::cos(ang), std::sin(ang));
    Vec img = Vec::Zero(3);
    if (j % 2 == 0) img << p.radius * std::cos(third * (j / 2)), p.radius * std::sin(third * (j / 2)), p.tau;
    m.images.push_back(img);
  }
  for (int k = 0; k < 3; ++k) {
    const double ang = third * k;
    m.vertices.emplace_back(0.4 * std::cos(ang), 0.4 * std::sin(ang));
    Vec img(3);
    img << p.rho * std::cos(ang - p.phi), p.rho * std::sin(ang - p.phi), p.zeta;
    m.images.push_back(img);
  }
  auto b = [](int j) { return j % 6; };
  auto c = [](int k) { return 6 + k % 3; };
  for (int k = 0; k < 3; ++k) {
    m.triangles.push_back({b(2 * k), b(2 * k + 1), c(k)});
    m.triangles.push_back({b(2 * k + 1), b(2 * k + 2), c(k + 1)});
    m.triangles.push_back({b(2 * k + 1), c(k + 1), c(k)});
  }
  m.triangles.push_back({6, 7, 8});
  m.boundary_loop = {0, 1, 2, 3, 4, 5};
  require_valid_disc(m);
  return m;
}

double rotation_range(const MappedDisc& m) {
  if (m.size() != 9 || m.triangles.size() != 10 || m.dimension() != 3)
    fail_input("rotation_range: not a ten-triangle hexagon disc");
  const Vec3 tip = img3(m, 0), center = img3(m, 6);
  const double lag = std::atan2(tip.y(), tip.x()) - std::atan2(center.y(), center.x());
  return 2.0 * std::remainder(lag, kTwoPi);
}

ShorteningReport shorten_by_rotation(const MappedDisc& m, double epsilon) {
  require_valid_disc(m);
  const double range = rotation_range(m);
  if (!std::isfinite(epsilon) || std::abs(epsilon) >= std::abs(range))
    fail_input("shorten_by_rotation: |epsilon| must be below the validated range " + std::to_string(std::abs(range)));
  ShorteningReport r;
  r.epsilon = epsilon;
  r.rotated = m;
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(epsilon, Vec3::UnitZ()).toRotationMatrix();
  for (int k = 6; k < 9; ++k) r.rotated.images[k] = rot * img3(m, k);
  r.before = length_pseudometric(m, 1);
  r.after = length_pseudometric(r.rotated, 1);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      r.max_increase = std::max(r.max_increase, r.after(i, j) - r.before(i, j));
      r.max_decrease = std::max(r.max_decrease, r.before(i, j) - r.after(i, j));
    }
  for (int v : m.boundary_loop)
    if ((r.rotated.images[v] - m.images[v]).norm() != 0.0) r.boundary_unchanged = false;
  r.pareto = r.max_increase <= 1e-9;
  const auto b2 = length_pseudometric(m, 2), a2 = length_pseudometric(r.rotated, 2);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      r.refined_max_increase = std::max(r.refined_max_increase, a2(i, j) - b2(i, j));
  return r;
}

HexagonSearch search_hexagon_parameters(int extra_planes, std::uint64_t seed) {
  // Grid axes; index tuples address candidates.
  std::vector<double> rhos, phis, zetas, taus{0.5, 1.0};
  for (int i = 1; i <= 9; ++i) rhos.push_back(0.1 * i);
  for (int i = 1; i <= 10; ++i) phis.push_back(0.1 * i);
  for (int i = 0; i <= 16; ++i) zetas.push_back(-0.5 + 0.125 * i);
  const int nr = static_cast<int>(rhos.size()), np = static_cast<int>(phis.size());
  const int nz = static_cast<int>(zetas.size()), nt = static_cast<int>(taus.size());
  auto at = [&](int a, int b, int c, int d) {
    HexagonParams p;
    p.rho = rhos[a];
    p.phi = phis[b];
    p.zeta = zetas[c];
    p.tau = taus[d];
    return p;
  };
  std::vector<int> ok(nr * np * nz * nt, 0);
  auto idx = [&](int a, int b, int c, int d) { return ((a * np + b) * nz + c) * nt + d; };
  HexagonSearch s;
  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < np; ++b)
      for (int c = 0; c < nz; ++c)
        for (int d = 0; d < nt; ++d) {
          ++s.candidates;
          ok[idx(a, b, c, d)] = is_saddle_pl(hexagon_counterexample(at(a, b, c, d)), extra_planes, seed).saddle;
          s.feasible += ok[idx(a, b, c, d)];
        }
  auto feasible = [&](int a, int b, int c, int d) {
    return a >= 0 && a < nr && b >= 0 && b < np && c >= 0 && c < nz && d >= 0 && d < nt && ok[idx(a, b, c, d)];
  };
  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < np; ++b)
      for (int c = 0; c < nz; ++c)
        for (int d = 0; d < nt; ++d) {
          if (!feasible(a, b, c, d)) continue;
          // Neighbours along rho, phi and zeta must pass as well.
          if (!(feasible(a - 1, b, c, d) && feasible(a + 1, b, c, d) && feasible(a, b - 1, c, d) &&
                feasible(a, b + 1, c, d) && feasible(a, b, c - 1, d) && feasible(a, b, c + 1, d)))
            continue;
          const HexagonParams p = at(a, b, c, d);
          const double eps = p.phi / 2.0;
          const auto rep = shorten_by_rotation(hexagon_counterexample(p), eps);
          if (!rep.pareto || rep.max_decrease < 1e-4) continue;
          s.params = p;
          s.epsilon = eps;
          return s;
        }
  throw Error(ErrorKind::Numerical, "no feasible configuration on the search grid", "search_hexagon_parameters");
}

}  // namespace catmin
