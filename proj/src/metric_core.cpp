#include "metric_core.hpp"

#include "union_find.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace catmin {

PseudometricCheck verify_pseudometric(const PseudometricMatrix& p, double tol) {
  PseudometricCheck c;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    c.worst_diagonal = std::max(c.worst_diagonal, std::abs(p(i, i)));
    for (std::size_t j = 0; j < n; ++j) {
      if (p(i, j) < 0.0 || std::isnan(p(i, j))) c.negative_entry = true;
      const double a = p(i, j), b = p(j, i);
      if (std::isinf(a) != std::isinf(b)) {
        c.worst_asymmetry = kInf;
      } else if (!std::isinf(a)) {
        c.worst_asymmetry = std::max(c.worst_asymmetry, std::abs(a - b));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isinf(p(i, j))) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (std::isinf(p(j, k)) || std::isinf(p(i, k))) continue;
        c.worst_triangle_excess = std::max(c.worst_triangle_excess, p(i, k) - p(i, j) - p(j, k));
      }
    }
  c.ok = !c.negative_entry && c.worst_diagonal <= tol && c.worst_asymmetry <= tol &&
         c.worst_triangle_excess <= tol;
  return c;
}

// ---------------------------------------------------------------------------
// Mesh validation and topology

namespace {

std::array<int, 2> ordered(int a, int b) { return a < b ? std::array{a, b} : std::array{b, a}; }

std::map<std::array<int, 2>, int> edge_triangle_counts(const MappedDisc& m) {
  std::map<std::array<int, 2>, int> count;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) ++count[ordered(t[k], t[(k + 1) % 3])];
  return count;
}

}  // namespace

std::vector<std::string> disc_diagnostics(const MappedDisc& m) {
  std::vector<std::string> out;
  const int n = static_cast<int>(m.vertices.size());
  auto diag = [&out](const std::string& s) { out.push_back(s); };

  if (n == 0) diag("vertices: empty");
  if (m.triangles.empty()) diag("triangles: empty");
  if (m.images.size() != m.vertices.size()) {
    std::ostringstream s;
    s << "images: expected " << n << " entries, found " << m.images.size();
    diag(s.str());
  }
  for (int v = 0; v < n; ++v)
    if (!m.vertices[v].allFinite()) diag("vertices[" + std::to_string(v) + "]: non-finite coordinate");
  const int dim = m.dimension();
  for (std::size_t v = 0; v < m.images.size(); ++v) {
    if (static_cast<int>(m.images[v].size()) != dim || dim == 0)
      diag("images[" + std::to_string(v) + "]: inconsistent dimension");
    else if (!m.images[v].allFinite())
      diag("images[" + std::to_string(v) + "]: non-finite coordinate");
  }

  bool indices_ok = true;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= n) {
        diag("triangles[" + std::to_string(t) + "][" + std::to_string(k) + "]: index out of range");
        indices_ok = false;
      }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      diag("triangles[" + std::to_string(t) + "]: repeated vertex");
      indices_ok = false;
    }
  }
  for (std::size_t k = 0; k < m.boundary_loop.size(); ++k)
    if (m.boundary_loop[k] < 0 || m.boundary_loop[k] >= n) {
      diag("boundary_loop[" + std::to_string(k) + "]: index out of range");
      indices_ok = false;
    }
  if (!indices_ok || out.size() > 0) return out;

  std::vector<int> uses(n, 0);
  for (const auto& t : m.triangles)
    for (int v : t) ++uses[v];
  for (int v = 0; v < n; ++v)
    if (uses[v] == 0) diag("vertices[" + std::to_string(v) + "]: not in any triangle");

  const auto counts = edge_triangle_counts(m);
  std::set<std::array<int, 2>> boundary_edges;
  for (const auto& [e, c] : counts) {
    if (c > 2) diag("triangles: edge (" + std::to_string(e[0]) + "," + std::to_string(e[1]) + ") in more than two triangles");
    if (c == 1) boundary_edges.insert(e);
  }
  const long euler = static_cast<long>(n) - static_cast<long>(counts.size()) +
                     static_cast<long>(m.triangles.size());
  if (euler != 1) diag("triangles: Euler characteristic " + std::to_string(euler) + " (expected 1)");

  const auto& loop = m.boundary_loop;
  if (loop.size() < 3) {
    diag("boundary_loop: fewer than three vertices");
  } else {
    std::set<int> seen(loop.begin(), loop.end());
    if (seen.size() != loop.size()) diag("boundary_loop: repeated vertex");
    std::set<std::array<int, 2>> loop_edges;
    for (std::size_t k = 0; k < loop.size(); ++k)
      loop_edges.insert(ordered(loop[k], loop[(k + 1) % loop.size()]));
    if (loop_edges != boundary_edges)
      diag("boundary_loop: does not traverse exactly the edges belonging to one triangle");
  }

  // Each vertex star must be a single fan.
  for (int v = 0; v < n && out.empty(); ++v) {
    std::vector<int> tris;
    for (std::size_t t = 0; t < m.triangles.size(); ++t)
      if (std::find(m.triangles[t].begin(), m.triangles[t].end(), v) != m.triangles[t].end())
        tris.push_back(static_cast<int>(t));
    UnionFind uf(tris.size());
    for (std::size_t a = 0; a < tris.size(); ++a)
      for (std::size_t b = a + 1; b < tris.size(); ++b) {
        int shared = 0;
        for (int x : m.triangles[tris[a]])
          for (int y : m.triangles[tris[b]]) shared += (x == y);
        if (shared >= 2) uf.unite(a, b);
      }
    for (std::size_t a = 1; a < tris.size(); ++a)
      if (!uf.same(0, a)) {
        diag("vertices[" + std::to_string(v) + "]: star is not a single fan");
        break;
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void require_valid_disc(const MappedDisc& m) {
  const auto d = disc_diagnostics(m);
  if (!d.empty()) fail_input("invalid mapped disc: " + d.front());
}

std::vector<std::array<int, 2>> mesh_edges(const MappedDisc& m) {
  std::set<std::array<int, 2>> s;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) s.insert(ordered(t[k], t[(k + 1) % 3]));
  return {s.begin(), s.end()};
}

Adjacency mesh_adjacency(const MappedDisc& m) {
  Adjacency adj(m.vertices.size());
  for (const auto& e : mesh_edges(m)) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<bool> boundary_mask(const MappedDisc& m) {
  std::vector<bool> mask(m.vertices.size(), false);
  for (int v : m.boundary_loop) mask[v] = true;
  return mask;
}

// ---------------------------------------------------------------------------
// Length pseudometric

RefinedGraph refined_graph(const MappedDisc& m, int refinement) {
  if (refinement < 1) fail_input("refinement must be >= 1");
  const int n = static_cast<int>(m.vertices.size());
  RefinedGraph g;
  g.images = m.images;

  // Subdivision nodes along each edge, ordered from the smaller endpoint.
  std::map<std::array<int, 2>, std::vector<int>> edge_nodes;
  for (const auto& e : mesh_edges(m)) {
    std::vector<int> chain{e[0]};
    for (int k = 1; k < refinement; ++k) {
      const double s = static_cast<double>(k) / refinement;
      chain.push_back(static_cast<int>(g.images.size()));
      g.images.push_back((1.0 - s) * m.images[e[0]] + s * m.images[e[1]]);
    }
    chain.push_back(e[1]);
    edge_nodes.emplace(e, std::move(chain));
  }
  g.adj.assign(g.images.size(), {});
  auto link = [&g](int a, int b) {
    const double w = (g.images[a] - g.images[b]).norm();
    g.adj[a].emplace_back(b, w);
    g.adj[b].emplace_back(a, w);
  };
  for (const auto& [e, chain] : edge_nodes)
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) link(chain[k], chain[k + 1]);

  if (refinement > 1) {
    // Chords between nodes lying on different edges of a common triangle.
    for (const auto& t : m.triangles) {
      std::array<const std::vector<int>*, 3> sides{};
      for (int k = 0; k < 3; ++k) sides[k] = &edge_nodes.at(ordered(t[k], t[(k + 1) % 3]));
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          for (int x : *sides[a])
            for (int y : *sides[b])
              if (x != y && !(x < n && y < n)) link(x, y);
    }
  }
  return g;
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int source, std::vector<int>* pred) {
  std::vector<double> dist(adj.size(), kInf);
  if (pred) pred->assign(adj.size(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : adj[u]) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        if (pred) (*pred)[v] = u;
        pq.emplace(nd, v);
      }
    }
  }
  return dist;
}

namespace {

PseudometricMatrix vertex_distances(const std::vector<std::vector<std::pair<int, double>>>& adj,
                                    std::size_t n) {
  PseudometricMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = dijkstra(adj, static_cast<int>(i));
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = d[j];
  }
  // Symmetrize against floating-point path-order differences.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.set(i, j, std::min(out(i, j), out(j, i)));
  return out;
}

}  // namespace

PseudometricMatrix length_pseudometric(const MappedDisc& m, int refinement) {
  require_valid_disc(m);
  const auto g = refined_graph(m, refinement);
  return vertex_distances(g.adj, m.size());
}

// ---------------------------------------------------------------------------
// Connecting pseudometric

namespace {

double image_diameter(const std::vector<Vec>& images, const std::vector<int>& set) {
  double d = 0.0;
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      d = std::max(d, (images[set[a]] - images[set[b]]).norm());
  return d;
}

// Enumerates every connected vertex set once (rooted at its smallest vertex)
// and records, for each pair it contains, the smallest diameter seen.
class ConnectedSetEnumerator {
 public:
  ConnectedSetEnumerator(const Adjacency& adj, const std::vector<Vec>& images)
      : n_(static_cast<int>(adj.size())), adjmask_(n_, 0), dist_(n_ * n_), best_(n_, kInf) {
    for (int v = 0; v < n_; ++v)
      for (int w : adj[v]) adjmask_[v] |= (1u << w);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) dist_[a * n_ + b] = (images[a] - images[b]).norm();
  }

  PseudometricMatrix run() {
    for (int r = 0; r < n_; ++r) {
      const std::uint32_t below = (1u << r) - 1u;
      const std::uint32_t s = 1u << r;
      grow(s, adjmask_[r] & ~below & ~s, below, 0.0);
    }
    return std::move(best_);
  }

 private:
  void grow(std::uint32_t set, std::uint32_t ext, std::uint32_t banned, double diam) {
    record(set, diam);
    while (ext) {
      const int v = std::countr_zero(ext);
      ext &= ext - 1;
      double nd = diam;
      for (std::uint32_t s = set; s; s &= s - 1) nd = std::max(nd, dist_[v * n_ + std::countr_zero(s)]);
      const std::uint32_t child = set | (1u << v);
      const std::uint32_t fresh = adjmask_[v] & ~child & ~banned & ~ext;
      grow(child, ext | fresh, banned, nd);
      banned |= (1u << v);
    }
  }

  void record(std::uint32_t set, double diam) {
    for (std::uint32_t a = set; a; a &= a - 1) {
      const int i = std::countr_zero(a);
      for (std::uint32_t b = a & (a - 1); b; b &= b - 1) {
        const int j = std::countr_zero(b);
        if (diam < best_(i, j)) best_.set(i, j, diam);
      }
    }
  }

  int n_;
  std::vector<std::uint32_t> adjmask_;
  std::vector<double> dist_;
  PseudometricMatrix best_;
};

// Upper bracket for larger graphs: candidate connected sets are components of
// metric balls around each vertex, image-shortest paths, and shortest paths
// through zero-diameter classes. The min-plus closure keeps the result a
// pseudometric and never drops below the true value.
PseudometricMatrix connecting_upper(const Adjacency& adj, const std::vector<Vec>& images,
                                    double zero_tol) {
  const int n = static_cast<int>(adj.size());
  PseudometricMatrix up(n, kInf);

  for (int c = 0; c < n; ++c) {
    std::vector<int> order(n);
    std::vector<double> r(n);
    for (int v = 0; v < n; ++v) {
      order[v] = v;
      r[v] = (images[v] - images[c]).norm();
    }
    std::stable_sort(order.begin(), order.end(), [&r](int a, int b) { return r[a] < r[b]; });
    UnionFind uf(n);
    std::vector<std::vector<int>> members(n);
    std::vector<bool> in(n, false);
    for (int v = 0; v < n; ++v) members[v] = {v};
    for (int v : order) {
      const double bound = 2.0 * r[v];
      in[v] = true;
      for (int w : adj[v]) {
        if (!in[w]) continue;
        std::size_t a = uf.find(v), b = uf.find(w);
        if (a == b) continue;
        for (int x : members[a])
          for (int y : members[b])
            if (bound < up(x, y)) up.set(x, y, bound);
        uf.unite(a, b);
        const std::size_t root = uf.find(v);
        const std::size_t other = root == a ? b : a;
        members[root].insert(members[root].end(), members[other].begin(), members[other].end());
        members[other].clear();
      }
    }
  }

  auto path_candidates = [&](const std::vector<std::vector<std::pair<int, double>>>& wadj,
                             const std::vector<int>& class_of,
                             const std::vector<std::vector<int>>& classes) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> pred;
      const auto dist = dijkstra(wadj, i, &pred);
      for (int j = i + 1; j < n; ++j) {
        if (std::isinf(dist[j])) continue;
        std::set<int> nodes;
        for (int v = j; v != -1; v = pred[v]) {
          if (class_of.empty())
            nodes.insert(v);
          else
            nodes.insert(classes[class_of[v]].begin(), classes[class_of[v]].end());
        }
        const double d = image_diameter(images, {nodes.begin(), nodes.end()});
        if (d < up(i, j)) up.set(i, j, d);
      }
    }
  };

  std::vector<std::vector<std::pair<int, double>>> wadj(n);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v]) wadj[v].emplace_back(w, (images[v] - images[w]).norm());
  path_candidates(wadj, {}, {});

  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (up(i, j) <= zero_tol) uf.unite(i, j);
  const auto class_of = uf.labels();
  const int k = class_of.empty() ? 0 : *std::max_element(class_of.begin(), class_of.end()) + 1;
  if (k < n) {
    std::vector<std::vector<int>> classes(k);
    for (int v = 0; v < n; ++v) classes[class_of[v]].push_back(v);
    auto zadj = wadj;
    for (const auto& cls : classes)
      for (std::size_t a = 1; a < cls.size(); ++a) {
        zadj[cls[0]].emplace_back(cls[a], 0.0);
        zadj[cls[a]].emplace_back(cls[0], 0.0);
      }
    path_candidates(zadj, class_of, classes);
  }

  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (up(i, m) + up(m, j) < up(i, j)) up.at(i, j) = up(i, m) + up(m, j);
  return up;
}

}  // namespace

ConnectingResult connecting_pseudometric(const Adjacency& adj, const std::vector<Vec>& images,
                                         double zero_tol) {
  if (adj.size() != images.size()) fail_input("connecting_pseudometric: adjacency/image size mismatch");
  ConnectingResult out;
  if (adj.size() <= kConnectingExactLimit) {
    out.value = ConnectedSetEnumerator(adj, images).run();
    out.lower = out.value;
    out.exact = true;
    return out;
  }
  out.value = connecting_upper(adj, images, zero_tol);
  out.lower = PseudometricMatrix(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::size_t j = i + 1; j < adj.size(); ++j) {
      const double v = out.value(i, j);
      out.lower.set(i, j, std::isinf(v) ? kInf : std::max(0.5 * v, (images[i] - images[j]).norm()));
    }
  out.exact = false;
  return out;
}

ConnectingResult connecting_pseudometric(const MappedDisc& m, double zero_tol) {
  require_valid_disc(m);
  return connecting_pseudometric(mesh_adjacency(m), m.images, zero_tol);
}

// ---------------------------------------------------------------------------
// Intrinsic pseudometric, quotients, components

PseudometricMatrix intrinsic_pseudometric(const MappedDisc& m, double zero_tol, int refinement) {
  if (zero_tol < 0.0) fail_input("zero_tol must be >= 0");
  const auto conn = connecting_pseudometric(m, zero_tol);
  const auto q = metric_quotient(conn.value, zero_tol);
  auto g = refined_graph(m, refinement);
  const int n = static_cast<int>(m.size());
  for (int v = 0; v < n; ++v) {
    const int rep = q.representatives[q.class_of[v]];
    if (rep != v) {
      g.adj[rep].emplace_back(v, 0.0);
      g.adj[v].emplace_back(rep, 0.0);
    }
  }
  return vertex_distances(g.adj, m.size());
}

QuotientSpace metric_quotient(const PseudometricMatrix& p, double tol) {
  if (tol < 0.0) fail_input("metric_quotient: tol must be >= 0");
  const std::size_t n = p.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p(i, j) <= tol) uf.unite(i, j);
  QuotientSpace q;
  q.class_of = uf.labels();
  const std::size_t k = n == 0 ? 0 : *std::max_element(q.class_of.begin(), q.class_of.end()) + 1;
  q.representatives.assign(k, -1);
  for (std::size_t v = 0; v < n; ++v)
    if (q.representatives[q.class_of[v]] < 0) q.representatives[q.class_of[v]] = static_cast<int>(v);
  q.metric = PseudometricMatrix(k, kInf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const int a = q.class_of[i], b = q.class_of[j];
      if (a != b && p(i, j) < q.metric(a, b)) q.metric.set(a, b, p(i, j));
    }
  q.worst_triangle_excess = verify_pseudometric(q.metric, kInf).worst_triangle_excess;
  q.triangle_ok = q.worst_triangle_excess <= 2.0 * tol;
  return q;
}

std::vector<std::vector<int>> metric_components(const PseudometricMatrix& p) {
  const std::size_t n = p.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!std::isinf(p(i, j))) uf.unite(i, j);
  const auto labels = uf.labels();
  std::vector<std::vector<int>> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<std::size_t>(labels[v]) >= out.size()) out.resize(labels[v] + 1);
    out[labels[v]].push_back(static_cast<int>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monotone-light factorization witness and bubbles

namespace {

// Components of the subgraph induced by `keep`, each sorted, ordered by smallest member.
std::vector<std::vector<int>> induced_components(const Adjacency& adj, const std::vector<bool>& keep) {
  std::vector<int> comp(adj.size(), -1);
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (!keep[s] || comp[s] >= 0) continue;
    std::vector<int> members;
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (int w : adj[v])
        if (keep[w] && comp[w] < 0) {
          comp[w] = comp[s];
          stack.push_back(w);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

}  // namespace

MonotoneLightReport monotone_light_report(const MappedDisc& m, double zero_tol) {
  const auto conn = connecting_pseudometric(m, zero_tol);
  const auto q = metric_quotient(conn.value, zero_tol);
  const auto adj = mesh_adjacency(m);
  MonotoneLightReport r;
  r.class_of = q.class_of;
  r.classes.resize(q.representatives.size());
  for (std::size_t v = 0; v < m.size(); ++v) r.classes[q.class_of[v]].push_back(static_cast<int>(v));
  for (const auto& cls : r.classes) {
    std::vector<bool> keep(m.size(), false);
    for (int v : cls) keep[v] = true;
    const bool connected = induced_components(adj, keep).size() == 1;
    r.class_connected.push_back(connected);
    r.monotone = r.monotone && connected;
  }
  for (const auto& e : mesh_edges(m)) {
    if (q.class_of[e[0]] == q.class_of[e[1]]) continue;
    if ((m.images[e[0]] - m.images[e[1]]).norm() <= zero_tol) r.light_violations.push_back(e);
  }
  r.light = r.light_violations.empty();
  return r;
}

std::vector<BubbleWitness> no_bubble_check(const MappedDisc& m, double radius) {
  if (!(radius > 0.0)) fail_input("no_bubble_check: radius must be > 0");
  require_valid_disc(m);
  const auto adj = mesh_adjacency(m);
  const auto on_boundary = boundary_mask(m);
  std::vector<BubbleWitness> out;
  std::set<std::vector<int>> reported;
  for (std::size_t c = 0; c < m.size(); ++c) {
    std::vector<bool> keep(m.size());
    for (std::size_t v = 0; v < m.size(); ++v) keep[v] = (m.images[v] - m.images[c]).norm() >= radius;
    for (auto& comp : induced_components(adj, keep)) {
      const bool touches = std::any_of(comp.begin(), comp.end(), [&](int v) { return on_boundary[v]; });
      if (!touches && reported.insert(comp).second)
        out.push_back({static_cast<int>(c), std::move(comp)});
    }
  }
  return out;
}

}  // namespace catmin
