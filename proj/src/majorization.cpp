#include "majorization.hpp"

#include "union_find.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>

namespace catmin {

double ComparisonTriangle::area() const {
  const Vec2 u = corners[1] - corners[0];
  const Vec2 v = corners[2] - corners[0];
  return 0.5 * std::abs(u.x() * v.y() - u.y() * v.x());
}

ComparisonTriangle comparison_triangle(double a, double b, double c) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(c >= 0.0) || !std::isfinite(a + b + c))
    fail_input("comparison_triangle: side lengths must be finite and >= 0");
  const double slack = 1e-12 * std::max(1.0, a + b + c);
  if (a > b + c + slack || b > a + c + slack || c > a + b + slack)
    fail_input("comparison_triangle: triangle inequality violated");
  ComparisonTriangle t;
  t.a = a;
  t.b = b;
  t.c = c;
  // Corner 0 at the origin, corner 1 on the positive x-axis, corner 2 above.
  t.corners[0] = Vec2(0.0, 0.0);
  t.corners[1] = Vec2(a, 0.0);
  if (a > 0.0 && c > 0.0) {
    const double alpha = angle_from_sides(a, c, b);
    t.corners[2] = Vec2(c * std::cos(alpha), c * std::sin(alpha));
  } else {
    t.corners[2] = Vec2(c, 0.0);
  }
  // Angles from sides; a zero side leaves the adjacent angles at the thin
  // isosceles limit.
  auto angle = [](double s1, double s2, double opp) {
    if (s1 > 0.0 && s2 > 0.0) return angle_from_sides(s1, s2, opp);
    return -1.0;
  };
  t.angles = {angle(a, c, b), angle(a, b, c), angle(b, c, a)};
  const int zeros = (a <= 0.0) + (b <= 0.0) + (c <= 0.0);
  if (zeros >= 2) {
    t.angles = {kPi / 3, kPi / 3, kPi / 3};
  } else if (zeros == 1) {
    for (double& x : t.angles) x = x < 0.0 ? kPi / 2 : x;
  }
  const double scale = std::max({a, b, c, 1e-300});
  t.degenerate = 2.0 * t.area() <= 1e-12 * scale * scale;
  return t;
}

namespace {

// Removes back-and-forth traversals (spikes) from a closed face walk.
void remove_spikes(std::vector<int>& V, std::vector<int>& E) {
  bool changed = true;
  while (changed && !V.empty()) {
    changed = false;
    const int n = static_cast<int>(V.size());
    if (n <= 2) {
      if (n == 2 && E[0] == E[1]) {
        V.clear();
        E.clear();
      }
      return;
    }
    for (int k = 0; k < n; ++k)
      if (E[k] == E[(k + 1) % n]) {
        std::rotate(V.begin(), V.begin() + k, V.end());
        std::rotate(E.begin(), E.begin() + k, E.end());
        V.erase(V.begin() + 1, V.begin() + 3);
        E.erase(E.begin(), E.begin() + 2);
        changed = true;
        break;
      }
  }
}

}  // namespace

GluedDisc glue_disc(const GraphInTarget& input, const Tolerances& tol) {
  GraphInTarget g = input;
  if (!g.has_rotation()) {
    if (g.param.size() != g.size()) fail_input("glue_disc: graph has neither a rotation system nor an embedding");
    g.rotation = rotation_from_embedding(g);
  }
  if (auto d = graph_diagnostics(g, true); !d.empty()) fail_input("glue_disc: " + d.front());

  GluedDisc out;
  const int ne = static_cast<int>(g.edges.size());
  for (int e = 0; e < ne; ++e)
    out.max_gluing_mismatch = std::max(out.max_gluing_mismatch, g.realized_length(e) - g.edge_length(e));
  if (out.max_gluing_mismatch > 1e-9)
    throw Error(ErrorKind::Numerical, "gluing length mismatch " + std::to_string(out.max_gluing_mismatch) +
                                          " (edge realizations are not segments)", "glue_disc");

  PolyhedralDisc& w = out.w;
  w.num_vertices = static_cast<int>(g.size());
  for (int e = 0; e < ne; ++e) w.edges.push_back({g.edges[e][0], g.edges[e][1], g.edge_length(e)});
  if (ne == 0) {
    finalize_disc(w);
    return out;
  }
  out.faces = extract_faces(g);
  out.majorants.resize(out.faces.faces.size());
  const EuclideanSpace X(static_cast<int>(g.points[0].size()));

  for (int fi = 0; fi < static_cast<int>(out.faces.faces.size()); ++fi) {
    if (fi == out.faces.outer) continue;
    const Face& f = out.faces.faces[fi];
    std::vector<int> V = f.vertices, E = f.edges;
    remove_spikes(V, E);
    const int n = static_cast<int>(V.size());
    if (n < 3) continue;
    if (std::set<int>(V.begin(), V.end()).size() != V.size())
      throw Error(ErrorKind::Unsupported, "bounded face " + std::to_string(fi) + " is not bounded by a simple cycle",
                  "glue_disc");
    // Fan apex: the first vertex of the original walk that survived.
    for (int v : f.vertices) {
      auto it = std::find(V.begin(), V.end(), v);
      if (it != V.end()) {
        const auto k = it - V.begin();
        std::rotate(V.begin(), V.begin() + k, V.end());
        std::rotate(E.begin(), E.begin() + k, E.end());
        break;
      }
    }
    std::vector<Vec> pts;
    for (int v : V) pts.push_back(g.points[v]);
    FaceMajorant fm = face_majorant(X, pts, tol.angle);
    out.witness_ok = out.witness_ok && fm.witness_ok;

    // Diagonal i joins V[0] and V[i], 2 <= i <= n-2.
    std::vector<int> diag(n, -1);
    for (int i = 2; i <= n - 2; ++i) {
      diag[i] = static_cast<int>(w.edges.size());
      w.edges.push_back({V[0], V[i], (g.points[V[0]] - g.points[V[i]]).norm()});
    }
    for (int i = 1; i + 1 < n; ++i) {
      PolyTriangle t;
      t.v = {V[0], V[i], V[i + 1]};
      t.e = {i == 1 ? E[0] : diag[i], E[i], i + 1 == n - 1 ? E[n - 1] : diag[i + 1]};
      w.triangles.push_back(t);
      out.triangle_face.push_back(fi);
    }
    out.majorants[fi] = std::move(fm);
  }

  const Face& outer = out.faces.faces[out.faces.outer];
  w.boundary = outer.edges;
  w.boundary_vertices = outer.vertices;
  finalize_disc(w, 1e-9);

  std::vector<bool> in_triangle(ne, false);
  for (const auto& t : w.triangles)
    for (int e : t.e)
      if (e < ne) in_triangle[e] = true;
  for (int e = 0; e < ne; ++e)
    if (!in_triangle[e]) out.bare_edges.push_back(e);
  return out;
}

Cat0Report cat0_certificate(const PolyhedralDisc& w, const Tolerances& tol) {
  Cat0Report r;
  r.problems = polyhedral_diagnostics(w);
  r.simply_connected = r.problems.empty();
  const int n = w.num_vertices;
  UnionFind uf(n);
  for (const auto& e : w.edges)
    if (e.length <= tol.zero) uf.unite(e.a, e.b);
  std::vector<int> rep(n, -1);
  std::vector<bool> interior(n, true);
  std::vector<double> sum(n, 0.0);
  std::map<int, std::vector<int>> members;
  for (int v = 0; v < n; ++v) {
    const int c = static_cast<int>(uf.find(v));
    members[c].push_back(v);
    interior[c] = interior[c] && w.interior[v];
  }
  for (const auto& [c, vs] : members) {
    rep[c] = vs.front();
    if (vs.size() > 1) r.merged.push_back(vs);
  }
  for (const auto& t : w.triangles) {
    std::array<int, 3> c;
    for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(uf.find(t.v[k]));
    if (c[0] == c[1] || c[1] == c[2] || c[2] == c[0]) continue;
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = t.corners[(k + 1) % 3] - t.corners[k], b = t.corners[(k + 2) % 3] - t.corners[k];
      sum[c[k]] += std::atan2(std::abs(a.x() * b.y() - a.y() * b.x()), a.dot(b));
    }
  }
  bool angles_ok = true;
  for (const auto& [c, vs] : members) {
    if (!interior[c]) continue;
    r.interior_angles.emplace_back(rep[c], sum[c]);
    r.worst_deficit = std::max(r.worst_deficit, kTwoPi - sum[c]);
    if (sum[c] < kTwoPi - tol.angle) angles_ok = false;
  }
  std::sort(r.interior_angles.begin(), r.interior_angles.end());
  r.pass = r.simply_connected && angles_ok;
  return r;
}

ThinTriangleReport thin_triangle_test(const PolyhedralTarget& w, int samples, std::uint64_t seed) {
  if (samples < 0) fail_input("thin_triangle_test: samples must be >= 0");
  ThinTriangleReport rep;
  const int N = w.node_count();
  if (N < 3 || samples == 0) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, N - 1);
  std::vector<std::unique_ptr<PolyhedralTarget::Tree>> cache(N);
  auto tree = [&](int s) -> const PolyhedralTarget::Tree& {
    if (!cache[s]) cache[s] = std::make_unique<PolyhedralTarget::Tree>(w.shortest_tree(s));
    return *cache[s];
  };
  const double tiny = 1e-12 * (1.0 + w.spacing());
  long attempts = 0;
  while (rep.samples < samples) {
    if (++attempts > 100L * samples + 1000) break;
    const int p = pick(rng), q = pick(rng), r = pick(rng);
    const auto& P = tree(p);
    const double a = P.dist[q], b = P.dist[r], c = tree(q).dist[r];
    if (!(a > tiny && b > tiny && c > tiny) || !std::isfinite(a + b + c)) continue;
    const auto side_q = w.path_to(P, q);
    const auto side_r = w.path_to(P, r);
    std::uniform_int_distribution<std::size_t> iq(0, side_q.size() - 1), ir(0, side_r.size() - 1);
    const int x = side_q[iq(rng)];
    const int y = side_r[ir(rng)];
    const double s = P.dist[x], t = P.dist[y];
    const double gamma = angle_from_sides(a, b, c);
    const double comp = std::sqrt(std::max(0.0, s * s + t * t - 2.0 * s * t * std::cos(gamma)));
    const auto& Xt = tree(x);
    const double dxy = Xt.dist[y];
    const double allowance = w.node_bound(Xt, y) + w.node_bound(P, q) + w.node_bound(P, r);
    const double excess = dxy - comp;
    ++rep.samples;
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (excess - allowance > rep.worst_margin) {
      rep.worst_margin = excess - allowance;
      rep.allowance_at_worst = allowance;
      rep.worst_triangle = {p, q, r};
    }
  }
  rep.violation = rep.worst_margin > 0.0;
  return rep;
}

BoundaryArea boundary_and_area(const PolyhedralDisc& w) {
  BoundaryArea ba;
  for (int e : w.boundary) ba.length += w.edges[e].length;
  for (const auto& t : w.triangles) {
    const Vec2 u = t.corners[1] - t.corners[0];
    const Vec2 v = t.corners[2] - t.corners[0];
    ba.area += 0.5 * std::abs(u.x() * v.y() - u.y() * v.x());
  }
  ba.isoperimetric = ba.area <= ba.length * ba.length / (4.0 * kPi) + 1e-9;
  return ba;
}

CutReport cut_vertices(const PolyhedralDisc& w) {
  const int n = w.num_vertices;
  std::vector<std::vector<int>> adj(n);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : w.edges) {
    if (e.a == e.b || !seen.insert({std::min(e.a, e.b), std::max(e.a, e.b)}).second) continue;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  CutReport rep;
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> is_cut(n, false);
  std::vector<std::pair<int, int>> estack;
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int u, int parent) {
    disc[u] = low[u] = timer++;
    int children = 0;
    for (int v : adj[u]) {
      if (v == parent) continue;
      if (disc[v] < 0) {
        ++children;
        estack.emplace_back(u, v);
        dfs(v, u);
        low[u] = std::min(low[u], low[v]);
        if ((parent < 0 && children > 1) || (parent >= 0 && low[v] >= disc[u])) is_cut[u] = true;
        if (low[v] >= disc[u]) {
          std::set<int> block;
          while (true) {
            const auto [a, b] = estack.back();
            estack.pop_back();
            block.insert(a);
            block.insert(b);
            if (a == u && b == v) break;
          }
          rep.blocks.emplace_back(block.begin(), block.end());
        }
      } else if (disc[v] < disc[u]) {
        low[u] = std::min(low[u], disc[v]);
        estack.emplace_back(u, v);
      }
    }
  };
  for (int v = 0; v < n; ++v)
    if (disc[v] < 0 && !adj[v].empty()) dfs(v, -1);
  for (int v = 0; v < n; ++v)
    if (is_cut[v]) rep.cut_vertices.push_back(v);
  std::sort(rep.blocks.begin(), rep.blocks.end());
  return rep;
}

EpsilonNet epsilon_net(const PolyhedralTarget& target, double epsilon) {
  if (!(epsilon > 0.0)) fail_input("epsilon_net: epsilon must be positive");
  const PolyhedralDisc& w = target.disc();
  EpsilonNet net;
  net.epsilon = epsilon;
  for (int e : w.boundary) net.boundary_length += w.edges[e].length;
  const double ell = net.boundary_length / kTwoPi;
  const int m = static_cast<int>(std::ceil(10.0 * ell / epsilon));
  net.bound = 4.0 * (ell / epsilon) * (ell / epsilon) + m;

  std::vector<double> nearest(target.node_count(), kInf);
  auto absorb = [&](const SurfacePoint& p) {
    const auto d = target.distances_from(p);
    for (std::size_t i = 0; i < d.size(); ++i) nearest[i] = std::min(nearest[i], d[i]);
  };
  if (!w.boundary.empty() && net.boundary_length > 0.0) {
    // m points equally spaced by arclength along the boundary curve.
    std::size_t k = 0;
    double walked = 0.0;
    for (int j = 0; j < m; ++j) {
      const double s = net.boundary_length * j / m;
      while (k + 1 < w.boundary.size() && walked + w.edges[w.boundary[k]].length < s) {
        walked += w.edges[w.boundary[k]].length;
        ++k;
      }
      const PolyEdge& e = w.edges[w.boundary[k]];
      const double f = e.length > 0.0 ? std::clamp((s - walked) / e.length, 0.0, 1.0) : 0.0;
      const bool forward = e.a == w.boundary_vertices[k];
      absorb(target.edge_point(w.boundary[k], forward ? f : 1.0 - f));
    }
    net.boundary_points = m;
  }
  for (int node = 0; node < target.node_count(); ++node) {
    if (target.incidences(node).empty()) continue;
    if (nearest[node] > epsilon) {
      net.interior_nodes.push_back(node);
      absorb(target.node_point(node));
    }
  }
  net.size = net.boundary_points + static_cast<int>(net.interior_nodes.size());
  for (int node = 0; node < target.node_count(); ++node)
    if (!target.incidences(node).empty()) net.covering_radius = std::max(net.covering_radius, nearest[node]);
  return net;
}

}  // namespace catmin
