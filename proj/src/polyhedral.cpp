#include "polyhedral.hpp"

#include "union_find.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace catmin {

namespace {

// Corner angles of a laid-out triangle. Sides of zero length make the angles
// at their endpoints undefined; the limit of thin isosceles triangles is used.
std::array<double, 3> corner_angles(const std::array<double, 3>& side) {
  // side[k] joins corner k and k+1; the side opposite corner k is side[(k+1)%3].
  std::array<double, 3> ang{};
  const int zeros = (side[0] <= 0.0) + (side[1] <= 0.0) + (side[2] <= 0.0);
  if (zeros >= 2) return {kPi / 3, kPi / 3, kPi / 3};
  if (zeros == 1) {
    for (int k = 0; k < 3; ++k)
      if (side[k] <= 0.0) {
        ang[k] = ang[(k + 1) % 3] = kPi / 2;
        ang[(k + 2) % 3] = 0.0;
      }
    return ang;
  }
  for (int k = 0; k < 3; ++k) {
    const double adj1 = side[k];
    const double adj2 = side[(k + 2) % 3];
    ang[k] = angle_from_sides(adj1, adj2, side[(k + 1) % 3]);
  }
  return ang;
}

}  // namespace

namespace detail {

void boundary_from_free_edges(PolyhedralDisc& w) {
  std::vector<int> uses(w.edges.size(), 0);
  for (const auto& t : w.triangles)
    for (int e : t.e) ++uses[e];
  std::map<int, std::vector<std::pair<int, int>>> out;  // start vertex -> (edge, end vertex)
  for (const auto& t : w.triangles)
    for (int k = 0; k < 3; ++k)
      if (uses[t.e[k]] == 1) out[t.v[k]].emplace_back(t.e[k], t.v[(k + 1) % 3]);
  w.boundary.clear();
  w.boundary_vertices.clear();
  if (out.empty()) return;
  const int start = out.begin()->first;
  int v = start;
  std::set<int> used;
  while (true) {
    auto it = out.find(v);
    if (it == out.end()) break;
    auto& options = it->second;
    auto pick = std::find_if(options.begin(), options.end(), [&](auto& o) { return !used.count(o.first); });
    if (pick == options.end()) break;
    used.insert(pick->first);
    w.boundary.push_back(pick->first);
    w.boundary_vertices.push_back(v);
    v = pick->second;
    if (v == start) break;
  }
}

}  // namespace detail

void finalize_disc(PolyhedralDisc& w, double slack) {
  for (auto& t : w.triangles) {
    std::array<double, 3> side{};
    for (int k = 0; k < 3; ++k) {
      const PolyEdge& e = w.edges.at(t.e[k]);
      const int a = t.v[k], b = t.v[(k + 1) % 3];
      if (!((e.a == a && e.b == b) || (e.a == b && e.b == a)))
        fail_input("triangle side does not match its edge endpoints");
      side[k] = e.length;
    }
    for (int k = 0; k < 3; ++k)
      if (side[k] > side[(k + 1) % 3] + side[(k + 2) % 3] + slack)
        fail_input("triangle inequality violated by glued side lengths");
    // Corner 0 at the origin, corner 1 on the positive x-axis.
    const double c0 = side[0], c2 = side[2];
    t.corners[0] = Vec2(0.0, 0.0);
    t.corners[1] = Vec2(c0, 0.0);
    if (c0 > 0.0 && c2 > 0.0) {
      const double ang = angle_from_sides(c0, c2, side[1]);
      t.corners[2] = Vec2(c2 * std::cos(ang), c2 * std::sin(ang));
    } else {
      t.corners[2] = Vec2(c2, 0.0);
    }
    const double area2 = std::abs((t.corners[1] - t.corners[0]).x() * (t.corners[2] - t.corners[0]).y() -
                                  (t.corners[1] - t.corners[0]).y() * (t.corners[2] - t.corners[0]).x());
    const double scale = std::max({side[0], side[1], side[2], 1e-300});
    t.degenerate = area2 <= 1e-12 * scale * scale;
  }

  w.angle_sum.assign(w.num_vertices, 0.0);
  for (const auto& t : w.triangles) {
    std::array<double, 3> side{};
    for (int k = 0; k < 3; ++k) side[k] = w.edges[t.e[k]].length;
    const auto ang = corner_angles(side);
    for (int k = 0; k < 3; ++k) w.angle_sum[t.v[k]] += ang[k];
  }

  std::vector<bool> in_triangle(w.num_vertices, false);
  for (const auto& t : w.triangles)
    for (int v : t.v) in_triangle[v] = true;
  std::vector<bool> on_boundary(w.num_vertices, false);
  for (int v : w.boundary_vertices) on_boundary[v] = true;
  w.interior.assign(w.num_vertices, false);
  for (int v = 0; v < w.num_vertices; ++v) w.interior[v] = in_triangle[v] && !on_boundary[v];
}

std::vector<std::string> polyhedral_diagnostics(const PolyhedralDisc& w) {
  std::vector<std::string> out;
  const int ne = static_cast<int>(w.edges.size());
  for (int e = 0; e < ne; ++e) {
    const auto& ed = w.edges[e];
    if (ed.a < 0 || ed.a >= w.num_vertices || ed.b < 0 || ed.b >= w.num_vertices)
      out.push_back("edges[" + std::to_string(e) + "]: vertex index out of range");
    if (!(ed.length >= 0.0) || !std::isfinite(ed.length))
      out.push_back("edges[" + std::to_string(e) + "]: length must be finite and >= 0");
  }
  std::vector<int> uses(ne, 0);
  for (std::size_t t = 0; t < w.triangles.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int e = w.triangles[t].e[k];
      if (e < 0 || e >= ne) {
        out.push_back("triangles[" + std::to_string(t) + "]: edge index out of range");
        continue;
      }
      ++uses[e];
      const int a = w.triangles[t].v[k], b = w.triangles[t].v[(k + 1) % 3];
      const auto& ed = w.edges[e];
      if (!((ed.a == a && ed.b == b) || (ed.a == b && ed.b == a)))
        out.push_back("triangles[" + std::to_string(t) + "]: side " + std::to_string(k) +
                      " does not match edge endpoints");
      else {
        const double planar = (w.triangles[t].corners[k] - w.triangles[t].corners[(k + 1) % 3]).norm();
        if (std::abs(planar - ed.length) > 1e-9)
          out.push_back("triangles[" + std::to_string(t) + "]: glued side length mismatch");
      }
    }
  for (int e = 0; e < ne; ++e)
    if (uses[e] > 2) out.push_back("edges[" + std::to_string(e) + "]: glued to more than two triangles");
  if (!out.empty()) return out;
  if (ne == 0) {
    // A single point is the degenerate disc.
    if (w.num_vertices != 1 || !w.triangles.empty()) out.push_back("complex: no edges");
    return out;
  }

  std::vector<bool> used(w.num_vertices, false);
  for (const auto& ed : w.edges) used[ed.a] = used[ed.b] = true;
  const long v_used = std::count(used.begin(), used.end(), true);
  const long euler = v_used - ne + static_cast<long>(w.triangles.size());
  if (euler != 1) out.push_back("complex: Euler characteristic " + std::to_string(euler) + " (expected 1)");
  UnionFind uf(w.num_vertices);
  for (const auto& ed : w.edges) uf.unite(ed.a, ed.b);
  for (int v = 0; v < w.num_vertices; ++v)
    if (used[v] && !uf.same(v, w.edges.front().a)) {
      out.push_back("complex: not connected");
      break;
    }
  if (w.boundary.size() != w.boundary_vertices.size() || w.boundary.empty()) {
    out.push_back("boundary: missing or inconsistent walk");
  } else {
    for (std::size_t k = 0; k < w.boundary.size(); ++k) {
      const int e = w.boundary[k];
      const int from = w.boundary_vertices[k];
      const int to = w.boundary_vertices[(k + 1) % w.boundary.size()];
      if (e < 0 || e >= ne ||
          !((w.edges[e].a == from && w.edges[e].b == to) || (w.edges[e].a == to && w.edges[e].b == from))) {
        out.push_back("boundary: curve does not close up at step " + std::to_string(k));
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

PolyhedralTarget::PolyhedralTarget(PolyhedralDisc disc, int subdivision)
    : disc_(std::move(disc)), subdivision_(subdivision) {
  if (subdivision_ < 1) fail_input("PolyhedralTarget: subdivision must be >= 1");
  const int nt = static_cast<int>(disc_.triangles.size());
  const int ne = static_cast<int>(disc_.edges.size());
  std::vector<int> uses(ne, 0);
  for (const auto& t : disc_.triangles)
    for (int e : t.e) ++uses[e];
  std::vector<int> bare_cell(ne, -1);
  for (int e = 0; e < ne; ++e)
    if (uses[e] == 0) {
      bare_cell[e] = nt + static_cast<int>(bare_edges_.size());
      bare_edges_.push_back(e);
    }
  double longest = 0.0;
  for (const auto& e : disc_.edges) longest = std::max(longest, e.length);
  spacing_ = longest / subdivision_;

  nodes_.assign(disc_.num_vertices, {});
  std::vector<std::vector<int>> chain(ne);
  for (int e = 0; e < ne; ++e) {
    chain[e].push_back(disc_.edges[e].a);
    for (int k = 1; k < subdivision_; ++k) {
      chain[e].push_back(static_cast<int>(nodes_.size()));
      nodes_.emplace_back();
    }
    chain[e].push_back(disc_.edges[e].b);
  }
  const int ncells = nt + static_cast<int>(bare_edges_.size());
  cell_nodes_.assign(ncells, {});
  std::vector<std::vector<std::pair<int, Vec3>>> members(ncells);
  auto attach = [&](int node, int cell, const Vec3& c) {
    for (const auto& inc : nodes_[node])
      if (inc.cell == cell) return;
    nodes_[node].push_back({cell, c});
    members[cell].emplace_back(node, c);
    cell_nodes_[cell].push_back(node);
  };
  for (int t = 0; t < nt; ++t) {
    const auto& tri = disc_.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int e = tri.e[k];
      const int ia = disc_.edges[e].a == tri.v[k] ? k : (k + 1) % 3;
      const int ib = ia == k ? (k + 1) % 3 : k;
      for (int j = 0; j <= subdivision_; ++j) {
        const double s = static_cast<double>(j) / subdivision_;
        Vec3 c = Vec3::Zero();
        c[ia] += 1.0 - s;
        c[ib] += s;
        attach(chain[e][j], t, c);
      }
    }
  }
  for (int e = 0; e < ne; ++e)
    if (bare_cell[e] >= 0)
      for (int j = 0; j <= subdivision_; ++j)
        attach(chain[e][j], bare_cell[e], Vec3(static_cast<double>(j) / subdivision_, 0.0, 0.0));

  adj_.assign(nodes_.size(), {});
  auto arc = [&](int a, int b, double w) {
    adj_[a].push_back({b, w});
    adj_[b].push_back({a, w});
  };
  for (int t = 0; t < nt; ++t) {
    const auto& m = members[t];
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) arc(m[i].first, m[j].first, within_cell(t, m[i].second, m[j].second));
  }
  for (std::size_t b = 0; b < bare_edges_.size(); ++b) {
    const auto& ch = chain[bare_edges_[b]];
    const double step = disc_.edges[bare_edges_[b]].length / subdivision_;
    for (std::size_t k = 0; k + 1 < ch.size(); ++k) arc(ch[k], ch[k + 1], step);
  }
}

double PolyhedralTarget::within_cell(int cell, const Vec3& a, const Vec3& b) const {
  const int nt = static_cast<int>(disc_.triangles.size());
  if (cell < nt) {
    const auto& c = disc_.triangles[cell].corners;
    const Vec2 pa = a[0] * c[0] + a[1] * c[1] + a[2] * c[2];
    const Vec2 pb = b[0] * c[0] + b[1] * c[1] + b[2] * c[2];
    return (pa - pb).norm();
  }
  return std::abs(a[0] - b[0]) * disc_.edges[bare_edges_[cell - nt]].length;
}

void PolyhedralTarget::check(const SurfacePoint& p) const {
  const int nt = static_cast<int>(disc_.triangles.size());
  const int ncells = nt + static_cast<int>(bare_edges_.size());
  if (p.cell < 0 || p.cell >= ncells) fail_input("PolyhedralTarget: point cell out of range");
  if (p.cell < nt) {
    if (p.coords.minCoeff() < -1e-9 || std::abs(p.coords.sum() - 1.0) > 1e-9)
      fail_input("PolyhedralTarget: barycentric coordinates outside the triangle");
  } else if (p.coords[0] < -1e-9 || p.coords[0] > 1.0 + 1e-9) {
    fail_input("PolyhedralTarget: edge parameter outside [0, 1]");
  }
}

PolyhedralTarget::Seeded PolyhedralTarget::seed_and_run(const SurfacePoint& p) const {
  Seeded s;
  s.dist.assign(nodes_.size(), kInf);
  s.pred.assign(nodes_.size(), -1);
  s.hops.assign(nodes_.size(), 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int node : cell_nodes_[p.cell])
    for (const auto& inc : nodes_[node])
      if (inc.cell == p.cell) {
        const double d = within_cell(p.cell, p.coords, inc.coords);
        if (d < s.dist[node]) {
          s.dist[node] = d;
          pq.emplace(d, node);
        }
      }
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > s.dist[u]) continue;
    for (const auto& a : adj_[u]) {
      const double nd = d + a.w;
      if (nd < s.dist[a.to]) {
        s.dist[a.to] = nd;
        s.pred[a.to] = u;
        s.hops[a.to] = s.hops[u] + 1;
        pq.emplace(nd, a.to);
      }
    }
  }
  return s;
}

PolyhedralTarget::Measured PolyhedralTarget::measure(const SurfacePoint& p, const SurfacePoint& q) const {
  check(p);
  check(q);
  Measured best{kInf, 0.0};
  if (p.cell == q.cell) best = {within_cell(p.cell, p.coords, q.coords), spacing_};
  const auto s = seed_and_run(p);
  for (int node : cell_nodes_[q.cell])
    for (const auto& inc : nodes_[node])
      if (inc.cell == q.cell) {
        const double d = s.dist[node] + within_cell(q.cell, inc.coords, q.coords);
        if (d < best.distance) best = {d, spacing_ * (s.hops[node] + 2)};
      }
  return best;
}

std::vector<double> PolyhedralTarget::distances_from(const SurfacePoint& p) const {
  check(p);
  return seed_and_run(p).dist;
}

double PolyhedralTarget::distance(const SurfacePoint& p, const SurfacePoint& q) const {
  return measure(p, q).distance;
}

SurfacePoint PolyhedralTarget::geodesic_eval(const SurfacePoint& p, const SurfacePoint& q, double t) const {
  check(p);
  check(q);
  t = std::clamp(t, 0.0, 1.0);
  // Polyline of (cell, coords) pairs; consecutive entries share `cell` of the later one.
  struct Step {
    int cell;
    Vec3 from;
    Vec3 to;
    double len;
  };
  std::vector<Step> steps;
  double direct = p.cell == q.cell ? within_cell(p.cell, p.coords, q.coords) : kInf;
  const auto s = seed_and_run(p);
  int last = -1;
  Vec3 last_coords;
  double via = kInf;
  for (int node : cell_nodes_[q.cell])
    for (const auto& inc : nodes_[node])
      if (inc.cell == q.cell) {
        const double d = s.dist[node] + within_cell(q.cell, inc.coords, q.coords);
        if (d < via) {
          via = d;
          last = node;
          last_coords = inc.coords;
        }
      }
  if (direct <= via || last < 0) {
    if (p.cell != q.cell) return t < 0.5 ? p : q;
    return {p.cell, (1.0 - t) * p.coords + t * q.coords};
  }
  std::vector<int> path;
  for (int v = last; v != -1; v = s.pred[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());

  auto coords_in = [this](int node, int cell) -> const Vec3* {
    for (const auto& inc : nodes_[node])
      if (inc.cell == cell) return &inc.coords;
    return nullptr;
  };
  auto common_cell = [this](int a, int b) {
    for (const auto& ia : nodes_[a])
      for (const auto& ib : nodes_[b])
        if (ia.cell == ib.cell) return ia.cell;
    return -1;
  };
  steps.push_back({p.cell, p.coords, *coords_in(path.front(), p.cell),
                   within_cell(p.cell, p.coords, *coords_in(path.front(), p.cell))});
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int c = common_cell(path[k], path[k + 1]);
    const Vec3& a = *coords_in(path[k], c);
    const Vec3& b = *coords_in(path[k + 1], c);
    steps.push_back({c, a, b, within_cell(c, a, b)});
  }
  steps.push_back({q.cell, last_coords, q.coords, within_cell(q.cell, last_coords, q.coords)});

  double total = 0.0;
  for (const auto& st : steps) total += st.len;
  double target = t * total;
  for (const auto& st : steps) {
    if (target <= st.len || &st == &steps.back()) {
      const double f = st.len > 0.0 ? std::clamp(target / st.len, 0.0, 1.0) : 0.0;
      return {st.cell, (1.0 - f) * st.from + f * st.to};
    }
    target -= st.len;
  }
  return q;
}

SurfacePoint PolyhedralTarget::vertex_point(int v) const { return node_point(vertex_node(v)); }

SurfacePoint PolyhedralTarget::edge_point(int edge, double t) const {
  const int nt = static_cast<int>(disc_.triangles.size());
  for (int c = 0; c < nt; ++c) {
    const auto& tri = disc_.triangles[c];
    for (int k = 0; k < 3; ++k)
      if (tri.e[k] == edge) {
        const int ia = disc_.edges[edge].a == tri.v[k] ? k : (k + 1) % 3;
        const int ib = ia == k ? (k + 1) % 3 : k;
        Vec3 coords = Vec3::Zero();
        coords[ia] = 1.0 - t;
        coords[ib] = t;
        return {c, coords};
      }
  }
  for (std::size_t b = 0; b < bare_edges_.size(); ++b)
    if (bare_edges_[b] == edge) return {nt + static_cast<int>(b), Vec3(t, 0.0, 0.0)};
  fail_input("PolyhedralTarget: edge index out of range");
}

SurfacePoint PolyhedralTarget::node_point(int node) const {
  if (node < 0 || node >= node_count() || nodes_[node].empty())
    fail_input("PolyhedralTarget: node not in the space");
  return {nodes_[node].front().cell, nodes_[node].front().coords};
}

PolyhedralTarget::Tree PolyhedralTarget::shortest_tree(int source) const {
  auto s = seed_and_run(node_point(source));
  return {source, std::move(s.dist), std::move(s.pred), std::move(s.hops)};
}

std::vector<int> PolyhedralTarget::path_to(const Tree& tree, int target) const {
  std::vector<int> path;
  for (int v = target; v != -1; v = tree.pred[v]) path.push_back(v);
  if (path.back() != tree.source) path.push_back(tree.source);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace catmin
