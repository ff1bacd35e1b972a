#include "disc_pipeline.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace catmin {

namespace {

using Chain = std::vector<int>;

std::vector<Chain> chains_between(const std::vector<std::vector<int>>& nbr, const std::vector<bool>& is_node) {
  std::set<std::pair<int, int>> used;
  std::vector<Chain> chains;
  auto key = [](int a, int b) { return std::pair{std::min(a, b), std::max(a, b)}; };
  for (int u = 0; u < static_cast<int>(nbr.size()); ++u) {
    if (!is_node[u]) continue;
    for (int w : nbr[u]) {
      if (used.count(key(u, w))) continue;
      Chain c{u, w};
      used.insert(key(u, w));
      int prev = u, cur = w;
      while (!is_node[cur]) {
        const int next = nbr[cur][0] == prev ? nbr[cur][1] : nbr[cur][0];
        used.insert(key(cur, next));
        c.push_back(next);
        prev = cur;
        cur = next;
      }
      chains.push_back(std::move(c));
    }
  }
  return chains;
}

template <class Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw Error(e.kind(), e.what(), stage);
  }
}

}  // namespace

GeodesicGraph geodesic_graph(const MappedDisc& m, const std::vector<int>& F) {
  require_valid_disc(m);
  const int n = static_cast<int>(m.size());
  if (F.empty()) fail_input("geodesic_graph: empty sample set");
  for (int x : F)
    if (x < 0 || x >= n) fail_input("geodesic_graph: sample vertex out of range");
  if (std::set<int>(F.begin(), F.end()).size() != F.size()) fail_input("geodesic_graph: repeated sample vertex");

  const RefinedGraph rg = refined_graph(m, 1);
  GeodesicGraph out;
  const int k = static_cast<int>(F.size());
  out.length.assign(k, std::vector<double>(k, 0.0));
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i) {
    std::vector<int> pred;
    const auto dist = dijkstra(rg.adj, F[i], &pred);
    for (int j = i + 1; j < k; ++j) {
      if (!std::isfinite(dist[F[j]])) fail_input("geodesic_graph: sample vertices at infinite distance");
      out.length[i][j] = out.length[j][i] = dist[F[j]];
      for (int v = F[j]; v != F[i]; v = pred[v]) edges.insert({std::min(v, pred[v]), std::max(v, pred[v])});
    }
  }
  std::vector<std::vector<int>> nbr(n);
  for (const auto& [a, b] : edges) {
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  std::vector<bool> is_node(n, false);
  for (int x : F) is_node[x] = true;
  for (int v = 0; v < n; ++v)
    if (!nbr[v].empty() && nbr[v].size() != 2) is_node[v] = true;

  // Promote interior vertices until the chains form a simple graph.
  std::vector<Chain> chains;
  while (true) {
    chains = chains_between(nbr, is_node);
    bool changed = false;
    std::map<std::pair<int, int>, int> seen;
    for (int c = 0; c < static_cast<int>(chains.size()) && !changed; ++c) {
      const auto& ch = chains[c];
      const auto key = std::pair{std::min(ch.front(), ch.back()), std::max(ch.front(), ch.back())};
      auto it = seen.find(key);
      if (ch.front() != ch.back() && it == seen.end()) {
        seen.emplace(key, c);
        continue;
      }
      const Chain& longer = (it != seen.end() && chains[it->second].size() > ch.size()) ? chains[it->second] : ch;
      is_node[longer[longer.size() / 2]] = true;
      changed = true;
    }
    if (!changed) break;
  }

  std::vector<int> gid(n, -1);
  auto add_vertex = [&](int v) {
    gid[v] = static_cast<int>(out.mesh_vertex.size());
    out.mesh_vertex.push_back(v);
  };
  for (int x : F) add_vertex(x);
  for (int v = 0; v < n; ++v)
    if (is_node[v] && gid[v] < 0) add_vertex(v);
  out.sample_vertex.resize(k);
  for (int i = 0; i < k; ++i) out.sample_vertex[i] = i;

  GraphInTarget& g = out.graph;
  const auto boundary = boundary_mask(m);
  const std::set<int> in_F(F.begin(), F.end());
  for (int v : out.mesh_vertex) {
    g.points.push_back(m.images[v]);
    g.param.push_back(m.vertices[v]);
    g.pinned.push_back(boundary[v] && in_F.count(v));
  }
  std::sort(chains.begin(), chains.end(), [&](const Chain& a, const Chain& b) {
    return std::pair{std::min(gid[a.front()], gid[a.back()]), std::max(gid[a.front()], gid[a.back()])} <
           std::pair{std::min(gid[b.front()], gid[b.back()]), std::max(gid[b.front()], gid[b.back()])};
  });
  for (auto ch : chains) {
    if (gid[ch.front()] > gid[ch.back()]) std::reverse(ch.begin(), ch.end());
    g.edges.push_back({gid[ch.front()], gid[ch.back()]});
    std::vector<Vec> inner;
    std::vector<Vec2> param;
    for (std::size_t t = 0; t < ch.size(); ++t) {
      if (t > 0 && t + 1 < ch.size()) inner.push_back(m.images[ch[t]]);
      param.push_back(m.vertices[ch[t]]);
    }
    g.realizations.push_back(std::move(inner));
    g.param_paths.push_back(std::move(param));
    out.mesh_path.push_back(std::move(ch));
  }
  g.rotation = rotation_from_embedding(g);
  return out;
}

Vec q_map(const GluedDisc& disc, const std::vector<Vec>& points, const PolyhedralTarget& w, const SurfacePoint& x) {
  const auto& W = disc.w;
  const int nt = static_cast<int>(W.triangles.size());
  if (x.cell < nt) {
    const auto& t = W.triangles[x.cell];
    return x.coords[0] * points[t.v[0]] + x.coords[1] * points[t.v[1]] + x.coords[2] * points[t.v[2]];
  }
  // Bare cells follow the edges in no triangle, in edge order.
  std::vector<bool> covered(W.edges.size(), false);
  for (const auto& t : W.triangles)
    for (int e : t.e) covered[e] = true;
  int idx = x.cell - nt;
  for (std::size_t e = 0; e < W.edges.size(); ++e) {
    if (covered[e]) continue;
    if (idx-- == 0) return (1.0 - x.coords[0]) * points[W.edges[e].a] + x.coords[0] * points[W.edges[e].b];
  }
  (void)w;
  fail_input("q_map: point outside W");
}

namespace {

struct Relaxed {
  GraphInTarget graph;
  MinimizationCertificate certificate;
};

// Relaxation with free leaves pruned first: a free leaf collapses onto its
// neighbor in any minimizer, and the zero-length edge would stall descent at
// the neighbor. Pruned vertices are placed on their anchor afterwards.
Relaxed relax_pruned(const GraphInTarget& gamma, const KeyLemmaOptions& opt) {
  GraphInTarget G = straighten(gamma);
  const int nv = static_cast<int>(G.size());
  std::vector<std::vector<std::pair<int, int>>> nbr(nv);  // (vertex, edge)
  for (int e = 0; e < static_cast<int>(G.edges.size()); ++e) {
    nbr[G.edges[e][0]].push_back({G.edges[e][1], e});
    nbr[G.edges[e][1]].push_back({G.edges[e][0], e});
  }
  std::vector<int> deg(nv);
  for (int v = 0; v < nv; ++v) deg[v] = static_cast<int>(nbr[v].size());
  std::vector<bool> removed(nv, false);
  std::vector<int> anchor(nv, -1), order;
  std::queue<int> leaves;
  for (int v = 0; v < nv; ++v)
    if (!G.pinned[v] && deg[v] == 1) leaves.push(v);
  while (!leaves.empty()) {
    const int v = leaves.front();
    leaves.pop();
    if (removed[v] || G.pinned[v] || deg[v] != 1) continue;
    for (const auto& [w, e] : nbr[v])
      if (!removed[w]) anchor[v] = w;
    removed[v] = true;
    order.push_back(v);
    const int w = anchor[v];
    if (--deg[w] == 1 && !G.pinned[w]) leaves.push(w);
  }

  GraphInTarget H;
  std::vector<int> hid(nv, -1), back;
  for (int v = 0; v < nv; ++v)
    if (!removed[v]) {
      hid[v] = static_cast<int>(back.size());
      back.push_back(v);
      H.points.push_back(G.points[v]);
      H.pinned.push_back(G.pinned[v]);
    }
  std::vector<int> heid(G.edges.size(), -1);
  for (int e = 0; e < static_cast<int>(G.edges.size()); ++e)
    if (!removed[G.edges[e][0]] && !removed[G.edges[e][1]]) {
      heid[e] = static_cast<int>(H.edges.size());
      H.edges.push_back({hid[G.edges[e][0]], hid[G.edges[e][1]]});
    }
  H.realizations.assign(H.edges.size(), {});
  H.rotation.resize(back.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    for (int e : G.rotation[back[i]])
      if (heid[e] >= 0) H.rotation[i].push_back(heid[e]);

  RelaxResult rr = relax(H, opt.tol, opt.max_iter);
  for (std::size_t i = 0; i < back.size(); ++i) G.points[back[i]] = rr.graph.points[i];
  for (auto it = order.rbegin(); it != order.rend(); ++it) G.points[*it] = G.points[anchor[*it]];
  for (auto& vc : rr.certificate.free_vertices) vc.vertex = back[vc.vertex];
  if (!order.empty())
    rr.certificate.log.push_back(std::to_string(order.size()) + " free leaves collapsed onto their anchors");
  return {std::move(G), std::move(rr.certificate)};
}

}  // namespace

KeyLemmaResult run_key_lemma(const MappedDisc& m, const std::vector<int>& F, const KeyLemmaOptions& opt) {
  KeyLemmaResult res;
  res.F = F;
  res.gamma = staged("geodesic_graph", [&] { return geodesic_graph(m, F); });
  const auto boundary = boundary_mask(m);
  const int k = static_cast<int>(F.size());
  for (int x : F) res.on_boundary.push_back(boundary[x]);
  const bool any_boundary = std::any_of(res.on_boundary.begin(), res.on_boundary.end(), [](bool b) { return b; });

  if (!any_boundary) {
    res.one_point = true;
    res.disc.w.num_vertices = 1;
    finalize_disc(res.disc.w);
    res.p.assign(k, 0);
    res.w_distance.assign(k, std::vector<double>(k, 0.0));
    res.relaxed.points = {m.images[F[0]]};
    res.relaxed.pinned = {false};
    res.certificate.valid = true;
    res.cat0 = cat0_certificate(res.disc.w, opt.tol);
    res.area = boundary_and_area(res.disc.w);
    res.log.push_back("no sample on the boundary: W is a single point");
    res.pass = true;
    return res;
  }

  auto relaxed = staged("relax", [&] { return relax_pruned(res.gamma.graph, opt); });
  res.relaxed = std::move(relaxed.graph);
  res.certificate = std::move(relaxed.certificate);
  res.disc = staged("glue_disc", [&] { return glue_disc(res.relaxed, opt.tol); });
  res.p = res.gamma.sample_vertex;

  const PolyhedralTarget W(res.disc.w, opt.subdivision);
  const int N = W.node_count();
  std::vector<std::unique_ptr<PolyhedralTarget::Tree>> cache(N);
  auto tree = [&](int s) -> const PolyhedralTarget::Tree& {
    if (!cache[s]) cache[s] = std::make_unique<PolyhedralTarget::Tree>(W.shortest_tree(s));
    return *cache[s];
  };

  res.w_distance.assign(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i) {
    const auto& T = tree(W.vertex_node(res.p[i]));
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      res.w_distance[i][j] = T.dist[W.vertex_node(res.p[j])];
      res.worst_contraction = std::max(res.worst_contraction, res.w_distance[i][j] - res.gamma.length[i][j]);
    }
    if (res.on_boundary[i])
      res.worst_boundary_gap =
          std::max(res.worst_boundary_gap, (res.relaxed.points[res.p[i]] - m.images[F[i]]).norm());
  }

  std::vector<Vec> qnode(N);
  for (int v = 0; v < N; ++v) qnode[v] = q_map(res.disc, res.relaxed.points, W, W.node_point(v));
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> pick(0, N - 1);
  for (int s = 0; s < opt.q_samples && N > 1; ++s) {
    const int x = pick(rng), y = pick(rng);
    const double dw = tree(x).dist[y];
    const double dt = (qnode[x] - qnode[y]).norm();
    res.worst_q_excess = std::max(res.worst_q_excess, dt - dw);
    if (dt - dw > opt.check_tol && res.q_violations.size() < 20)
      res.q_violations.push_back({W.node_point(x), W.node_point(y), dt, dw});
    ++res.q_sample_count;
  }

  res.cat0 = cat0_certificate(res.disc.w, opt.tol);
  res.area = boundary_and_area(res.disc.w);
  res.log = res.certificate.log;
  {
    std::ostringstream os;
    os << "W: " << res.disc.w.triangles.size() << " triangles, " << res.disc.bare_edges.size()
       << " bare edges; worst contraction excess " << res.worst_contraction << "; worst q excess "
       << res.worst_q_excess;
    res.log.push_back(os.str());
  }
  res.pass = res.certificate.valid && res.worst_contraction <= opt.check_tol &&
             res.worst_boundary_gap <= opt.check_tol && res.worst_q_excess <= opt.check_tol && res.cat0.pass &&
             res.area.isoperimetric && res.disc.witness_ok;
  return res;
}

RefinementStudy refinement_study(const MappedDisc& m, const std::vector<std::vector<int>>& F_sequence,
                                 const KeyLemmaOptions& opt) {
  RefinementStudy st;
  for (const auto& F : F_sequence) st.runs.push_back(run_key_lemma(m, F, opt));
  for (std::size_t r = 0; r + 1 < st.runs.size(); ++r) {
    const auto& A = st.runs[r];
    const auto& B = st.runs[r + 1];
    std::map<int, int> pos_b;
    for (int i = 0; i < static_cast<int>(B.F.size()); ++i) pos_b[B.F[i]] = i;
    std::vector<std::pair<int, int>> shared;  // (index in A, index in B)
    for (int i = 0; i < static_cast<int>(A.F.size()); ++i)
      if (auto it = pos_b.find(A.F[i]); it != pos_b.end()) shared.push_back({i, it->second});
    RefinementStep step;
    step.shared = static_cast<int>(shared.size());
    for (const auto& [ia, ib] : shared)
      for (const auto& [ja, jb] : shared) {
        const double da = A.w_distance[ia][ja];
        const double db = B.w_distance[ib][jb];
        step.distortion = std::max(step.distortion, std::abs(da - db));
        step.max_increase = std::max(step.max_increase, db - da);
      }
    st.steps.push_back(step);
  }
  return st;
}

}  // namespace catmin
