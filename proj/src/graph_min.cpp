#include "graph_min.hpp"

#include "union_find.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace catmin {

double GraphInTarget::realized_length(int e) const {
  if (realizations.empty() || realizations[e].empty()) return edge_length(e);
  double len = 0.0;
  Vec prev = points[edges[e][0]];
  for (const Vec& p : realizations[e]) {
    len += (p - prev).norm();
    prev = p;
  }
  return len + (points[edges[e][1]] - prev).norm();
}

namespace {

std::vector<std::vector<int>> incident_edges(const GraphInTarget& g) {
  std::vector<std::vector<int>> inc(g.size());
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    inc[g.edges[e][0]].push_back(e);
    inc[g.edges[e][1]].push_back(e);
  }
  return inc;
}

int other_end(const GraphInTarget& g, int e, int v) {
  return g.edges[e][0] == v ? g.edges[e][1] : g.edges[e][0];
}

}  // namespace

std::vector<std::string> graph_diagnostics(const GraphInTarget& g, bool allow_empty_pinned) {
  std::vector<std::string> out;
  const int n = static_cast<int>(g.size());
  if (n == 0) {
    out.push_back("graph has no vertices");
    return out;
  }
  const auto dim = g.points[0].size();
  for (int v = 0; v < n; ++v) {
    if (g.points[v].size() != dim) out.push_back("vertex " + std::to_string(v) + " has inconsistent dimension");
    else if (!g.points[v].allFinite()) out.push_back("vertex " + std::to_string(v) + " is not finite");
  }
  if (g.pinned.size() != g.size()) out.push_back("pinned flags do not match the vertex count");
  else if (!allow_empty_pinned && std::none_of(g.pinned.begin(), g.pinned.end(), [](bool b) { return b; }))
    out.push_back("no pinned vertices");
  if (!g.realizations.empty() && g.realizations.size() != g.edges.size())
    out.push_back("realizations do not match the edge count");

  std::set<std::pair<int, int>> seen;
  bool edges_ok = true;
  UnionFind uf(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [a, b] = g.edges[e];
    if (a < 0 || b < 0 || a >= n || b >= n) {
      out.push_back("edge " + std::to_string(e) + " has an endpoint out of range");
      edges_ok = false;
      continue;
    }
    if (a == b) out.push_back("edge " + std::to_string(e) + " is a loop");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      out.push_back("edge " + std::to_string(e) + " duplicates an earlier edge");
    uf.unite(a, b);
  }
  if (!edges_ok) return out;
  for (int v = 1; v < n; ++v)
    if (!uf.same(0, v)) {
      out.push_back("graph is not connected");
      break;
    }

  if (g.has_rotation()) {
    if (g.rotation.size() != g.size()) {
      out.push_back("rotation system does not match the vertex count");
      return out;
    }
    const auto inc = incident_edges(g);
    bool rot_ok = true;
    for (int v = 0; v < n; ++v) {
      auto a = g.rotation[v];
      auto b = inc[v];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) {
        out.push_back("rotation at vertex " + std::to_string(v) + " is not a permutation of its edges");
        rot_ok = false;
      }
    }
    if (rot_ok && out.empty()) {
      const auto faces = extract_faces(g);
      const long euler = static_cast<long>(n) - static_cast<long>(g.edges.size()) +
                         static_cast<long>(faces.faces.size());
      if (euler != 2)
        out.push_back("rotation system is not planar (V - E + F = " + std::to_string(euler) + ")");
    }
  }
  return out;
}

std::vector<std::vector<int>> rotation_from_embedding(const GraphInTarget& g) {
  if (g.param.size() != g.size()) fail_input("rotation_from_embedding: missing parameter positions");
  const auto inc = incident_edges(g);
  std::vector<std::vector<int>> rot(g.size());
  for (int v = 0; v < static_cast<int>(g.size()); ++v) {
    std::vector<std::pair<double, int>> keyed;
    for (int e : inc[v]) {
      Vec2 dir;
      const bool has_path = !g.param_paths.empty() && g.param_paths[e].size() >= 2;
      if (has_path) {
        const auto& path = g.param_paths[e];
        dir = g.edges[e][0] == v ? Vec2(path[1] - path[0]) : Vec2(path[path.size() - 2] - path.back());
      } else {
        dir = g.param[other_end(g, e, v)] - g.param[v];
      }
      keyed.push_back({std::atan2(dir.y(), dir.x()), e});
    }
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [angle, e] : keyed) rot[v].push_back(e);
  }
  return rot;
}

namespace {

double face_param_area(const GraphInTarget& g, const Face& f) {
  // Shoelace over the concatenated edge polylines in walk direction.
  std::vector<Vec2> ring;
  for (std::size_t k = 0; k < f.edges.size(); ++k) {
    const int e = f.edges[k];
    const int from = f.vertices[k];
    if (!g.param_paths.empty() && g.param_paths[e].size() >= 2) {
      auto path = g.param_paths[e];
      if (g.edges[e][0] != from) std::reverse(path.begin(), path.end());
      ring.insert(ring.end(), path.begin(), path.end() - 1);
    } else {
      ring.push_back(g.param[from]);
    }
  }
  double area = 0.0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const Vec2& p = ring[k];
    const Vec2& q = ring[(k + 1) % ring.size()];
    area += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * area;
}

}  // namespace

FaceSet extract_faces(const GraphInTarget& g) {
  if (!g.has_rotation()) fail_input("extract_faces: graph has no rotation system");
  const int m = static_cast<int>(g.edges.size());
  // Position of each edge in the rotation of each endpoint.
  std::vector<std::array<int, 2>> pos(m, {-1, -1});
  for (int v = 0; v < static_cast<int>(g.size()); ++v)
    for (int k = 0; k < static_cast<int>(g.rotation[v].size()); ++k) {
      const int e = g.rotation[v][k];
      pos[e][g.edges[e][0] == v ? 0 : 1] = k;
    }
  // Dart 2e runs edges[e][0] -> edges[e][1]; dart 2e+1 the reverse.
  std::vector<bool> used(2 * m, false);
  FaceSet fs;
  for (int start = 0; start < 2 * m; ++start) {
    if (used[start]) continue;
    Face f;
    int d = start;
    while (!used[d]) {
      used[d] = true;
      const int e = d / 2;
      const int from = g.edges[e][d % 2];
      const int to = g.edges[e][1 - d % 2];
      f.vertices.push_back(from);
      f.edges.push_back(e);
      // Next edge at `to`: the one just clockwise of the edge we arrived on.
      const auto& rot = g.rotation[to];
      const int k = pos[e][g.edges[e][0] == to ? 0 : 1];
      const int next = rot[(k + rot.size() - 1) % rot.size()];
      d = 2 * next + (g.edges[next][0] == to ? 0 : 1);
    }
    fs.faces.push_back(std::move(f));
  }
  const bool embedded = g.param.size() == g.size();
  double best = kInf;
  for (int i = 0; i < static_cast<int>(fs.faces.size()); ++i) {
    Face& f = fs.faces[i];
    double key;
    if (embedded) {
      f.param_area = face_param_area(g, f);
      key = f.param_area;
    } else {
      double len = 0.0;
      for (int e : f.edges) len += g.realized_length(e);
      key = -len;
    }
    if (key < best) {
      best = key;
      fs.outer = i;
    }
  }
  return fs;
}

GraphInTarget straighten(const GraphInTarget& g) {
  GraphInTarget out = g;
  out.realizations.assign(g.edges.size(), {});
  return out;
}

namespace {

// Wolfe's algorithm in scalar type T; `support` receives the final corral.
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> wolfe(const std::vector<Vec>& input, std::vector<int>& support) {
  using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  if (input.empty()) fail_input("min_norm_point: empty point set");
  const int n = static_cast<int>(input.size());
  std::vector<VecT> pts;
  for (const Vec& p : input) pts.push_back(p.cast<T>());
  const T eps = std::numeric_limits<T>::epsilon();
  T scale = 0;
  for (const VecT& p : pts) scale = std::max(scale, p.squaredNorm());
  scale = std::max(scale, T(1e-300));
  // |x| below 1000 eps of the largest point counts as zero. The optimality
  // test scales with |x| so that x / |x| stays a descent direction.
  const T zero = T(1e6) * eps * eps * scale;
  const T root = std::sqrt(scale);
  const T tiny = T(100) * eps;

  int first = 0;
  for (int i = 1; i < n; ++i)
    if (pts[i].squaredNorm() < pts[first].squaredNorm()) first = i;
  std::vector<int> S{first};
  std::vector<T> lambda{T(1)};
  VecT x = pts[first];

  for (int major = 0; major < 50 * (n + 5); ++major) {
    support = S;
    if (x.squaredNorm() <= zero) return VecT::Zero(x.size());
    int j = 0;
    T best = std::numeric_limits<T>::infinity();
    for (int i = 0; i < n; ++i) {
      const T v = x.dot(pts[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (best >= x.squaredNorm() - T(1e4) * eps * x.norm() * root) return x;
    if (std::find(S.begin(), S.end(), j) != S.end()) return x;
    S.push_back(j);
    lambda.push_back(T(0));

    for (int minor = 0; minor < n + 5; ++minor) {
      // Affine minimizer over aff{p_s : s in S}: least squares on the
      // differences from the first point keeps the conditioning unsquared.
      const int k = static_cast<int>(S.size());
      const VecT& p0 = pts[S[0]];
      MatT D(p0.size(), k - 1);
      for (int a = 1; a < k; ++a) D.col(a - 1) = pts[S[a]] - p0;
      VecT sol(k);
      if (k > 1) {
        const VecT mu = D.completeOrthogonalDecomposition().solve(VecT(-p0));
        sol(0) = T(1) - mu.sum();
        sol.tail(k - 1) = mu;
      } else {
        sol(0) = T(1);
      }
      bool interior = true;
      for (int a = 0; a < k; ++a)
        if (sol(a) <= tiny) interior = false;
      if (interior) {
        x = VecT::Zero(x.size());
        for (int a = 0; a < k; ++a) {
          lambda[a] = sol(a);
          x += sol(a) * pts[S[a]];
        }
        break;
      }
      T theta = T(1);
      for (int a = 0; a < k; ++a)
        if (sol(a) <= tiny && lambda[a] - sol(a) > T(0)) theta = std::min(theta, lambda[a] / (lambda[a] - sol(a)));
      x = VecT::Zero(x.size());
      std::vector<int> S2;
      std::vector<T> l2;
      for (int a = 0; a < k; ++a) {
        const T l = (T(1) - theta) * lambda[a] + theta * sol(a);
        if (l > tiny) {
          S2.push_back(S[a]);
          l2.push_back(l);
        }
      }
      if (S2.empty()) {
        S2.push_back(S.back());
        l2.push_back(T(1));
      }
      const T total = std::accumulate(l2.begin(), l2.end(), T(0));
      for (std::size_t a = 0; a < S2.size(); ++a) {
        l2[a] /= total;
        x += l2[a] * pts[S2[a]];
      }
      S = std::move(S2);
      lambda = std::move(l2);
    }
  }
  support = S;
  return x;
}

}  // namespace

Vec min_norm_point(const std::vector<Vec>& pts) {
  std::vector<int> support;
  return wolfe<double>(pts, support);
}

DescentDirection descent_direction(const std::vector<Vec>& u) {
  if (u.empty()) fail_input("descent_direction: no incident edges");
  const auto dim = u[0].size();
  for (const Vec& v : u) {
    if (v.size() != dim || !v.allFinite()) fail_input("descent_direction: inconsistent input vectors");
    if (std::abs(v.norm() - 1.0) > 1e-6) fail_input("descent_direction: input vectors must be unit length");
  }
  DescentDirection out;
  // Extended precision: stationarity is judged near t* = 1e-8, where
  // products with z / |z| lose all digits in double.
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<int> active;
  const LVec z = wolfe<long double>(u, active);
  const long double r = z.norm();
  if (r > 1e-12L) {
    out.t_star = static_cast<double>(r);
    // Projecting out the span of the corral differences makes the products
    // with the corral vectors equal.
    LVec d = z / r;
    if (active.size() > 1) {
      LMat D(dim, active.size() - 1);
      for (std::size_t a = 1; a < active.size(); ++a)
        D.col(a - 1) = (u[active[a]] - u[active[0]]).cast<long double>();
      Eigen::ColPivHouseholderQR<LMat> qr(D);
      const auto rank = qr.rank();
      if (rank < dim) {
        const LMat Q = LMat(qr.householderQ()).leftCols(rank);
        const LVec refined = d - Q * (Q.transpose() * d);
        if (refined.norm() > 0.5L) d = refined.normalized();
      }
    }
    out.direction = d.cast<double>();
  }
  return out;
}

namespace {

bool is_zero_edge(const GraphInTarget& g, int e) {
  const Vec& a = g.points[g.edges[e][0]];
  return !(g.edge_length(e) > 1e-14 * (1.0 + a.norm()));
}

// Vertices joined by zero-length edges act as one vertex of the map.
struct Cluster {
  std::vector<int> members;           // ascending
  std::vector<std::pair<int, int>> external;  // (edge, member) in cyclic order when known
  bool pinned = false;
};

std::vector<Cluster> clusters(const GraphInTarget& g, const std::vector<std::vector<int>>& inc) {
  const int n = static_cast<int>(g.size());
  UnionFind uf(n);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (is_zero_edge(g, e)) uf.unite(g.edges[e][0], g.edges[e][1]);
  const auto label = uf.labels();
  std::vector<Cluster> out(*std::max_element(label.begin(), label.end()) + 1);
  for (int v = 0; v < n; ++v) {
    out[label[v]].members.push_back(v);
    if (g.pinned[v]) out[label[v]].pinned = true;
  }
  for (auto& c : out) {
    const int v0 = c.members.front();
    auto external = [&](int e, int v) { return label[other_end(g, e, v)] != label[v0]; };
    std::size_t total = 0;
    for (int v : c.members)
      for (int e : inc[v]) total += external(e, v);
    if (c.members.size() == 1) {
      for (int e : inc[v0]) c.external.push_back({e, v0});
      continue;
    }
    // Walk the contour of the merged star: internal edges hand over to the
    // member at their other end.
    std::set<std::pair<int, int>> seen;
    int sv = -1, sk = -1;
    for (int v : c.members)
      for (int k = 0; k < static_cast<int>(inc[v].size()) && sv < 0; ++k)
        if (external(inc[v][k], v)) sv = v, sk = k;
    if (sv >= 0) {
      int v = sv, k = sk;
      for (std::size_t guard = 0; guard < 4 * total + 16; ++guard) {
        const int e = inc[v][k];
        if (external(e, v)) {
          if (!seen.insert({e, v}).second) break;
          c.external.push_back({e, v});
          k = (k + 1) % static_cast<int>(inc[v].size());
        } else {
          const int w = other_end(g, e, v);
          const auto& rw = inc[w];
          const int pos = static_cast<int>(std::find(rw.begin(), rw.end(), e) - rw.begin());
          v = w;
          k = (pos + 1) % static_cast<int>(rw.size());
        }
      }
    }
    // Zero-length cycles can hide part of the star from the walk.
    for (int v : c.members)
      for (int e : inc[v])
        if (external(e, v) && !seen.count({e, v})) {
          seen.insert({e, v});
          c.external.push_back({e, v});
        }
  }
  return out;
}

void star_vectors(const GraphInTarget& g, const Cluster& c, std::vector<Vec>& out) {
  out.clear();
  for (const auto& [e, v] : c.external) {
    const Vec d = g.points[other_end(g, e, v)] - g.points[v];
    out.push_back(d / d.norm());
  }
}

double cyclic_angle_sum(const std::vector<Vec>& u) {
  if (u.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    s += std::acos(std::clamp(u[k].dot(u[(k + 1) % u.size()]), -1.0, 1.0));
  return s;
}

}  // namespace

MinimizationCertificate certify_conditions(const GraphInTarget& g, const Tolerances& tol) {
  if (auto d = graph_diagnostics(g); !d.empty()) fail_input("certify_conditions: " + d.front());
  MinimizationCertificate c;
  c.edge_residual.resize(g.edges.size());
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    c.edge_residual[e] = g.realized_length(e) - g.edge_length(e);
    c.worst_residual = std::max(c.worst_residual, c.edge_residual[e]);
  }
  const auto inc = g.has_rotation() ? g.rotation : incident_edges(g);
  bool ok = c.worst_residual <= tol.geodesic;
  c.worst_angle_deficit = -kInf;
  std::vector<Vec> u;
  for (const auto& cl : clusters(g, inc)) {
    if (cl.pinned || cl.external.empty()) continue;
    VertexCertificate vc;
    vc.vertex = cl.members.front();
    vc.merged.assign(cl.members.begin() + 1, cl.members.end());
    vc.degenerate = cl.members.size() > 1;
    if (vc.degenerate)
      c.log.push_back("vertices " + [&] {
        std::string s;
        for (int v : cl.members) s += (s.empty() ? "" : ",") + std::to_string(v);
        return s;
      }() + " share one image; certified as a single vertex");
    star_vectors(g, cl, u);
    vc.t_star = descent_direction(u).t_star;
    vc.angle_sum = cyclic_angle_sum(u);
    c.worst_t_star = std::max(c.worst_t_star, vc.t_star);
    c.worst_angle_deficit = std::max(c.worst_angle_deficit, kTwoPi - vc.angle_sum);
    if (vc.t_star > tol.descent || vc.angle_sum < kTwoPi - tol.angle) ok = false;
    c.free_vertices.push_back(vc);
  }
  if (c.worst_angle_deficit == -kInf) c.worst_angle_deficit = 0.0;
  c.valid = ok;
  return c;
}

namespace {

double total_length(const GraphInTarget& g) {
  double s = 0.0;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) s += g.edge_length(e);
  return s;
}

}  // namespace

RelaxResult relax(const GraphInTarget& input, const Tolerances& tol, int max_iter) {
  if (auto d = graph_diagnostics(input); !d.empty()) fail_input("relax: " + d.front());
  if (max_iter < 1) fail_input("relax: max_iter must be positive");
  RelaxResult res;
  res.graph = straighten(input);
  GraphInTarget& g = res.graph;
  const auto inc = incident_edges(g);
  res.total_length.push_back(total_length(g));
  std::vector<std::string> log;
  int sweeps = 0;
  bool converged = false;
  std::vector<Vec> u;

  auto move_to = [&](const Cluster& c, const Vec& p) {
    for (int v : c.members) g.points[v] = p;
  };

  for (; sweeps < max_iter; ++sweeps) {
    bool moved = false;
    auto cl = clusters(g, inc);
    for (std::size_t ci = 0; ci < cl.size(); ++ci) {
      const Cluster c = cl[ci];
      if (c.pinned || c.external.empty()) continue;
      // Several steps per visit; each one shortens every external edge.
      for (int inner = 0; inner < 32; ++inner) {
        star_vectors(g, c, u);
        const auto dd = descent_direction(u);
        if (dd.t_star <= tol.descent) break;
        std::vector<double> before;
        int nearest = -1;
        for (const auto& [e, v] : c.external) {
          before.push_back(g.edge_length(e));
          if (nearest < 0 || before.back() < before[nearest]) nearest = static_cast<int>(before.size()) - 1;
        }
        const Vec start = g.points[c.members.front()];
        auto pareto = [&](int allow_zero) {
          for (std::size_t k = 0; k < c.external.size(); ++k) {
            const int e = c.external[k].first;
            if (static_cast<int>(k) == allow_zero || (allow_zero >= 0 && e == c.external[allow_zero].first)) continue;
            if (!(g.edge_length(e) < before[k])) return false;
          }
          return true;
        };
        // Merging with the nearest neighbour ends the creep towards it.
        const auto [ne, nv] = c.external[nearest];
        const Vec target = g.points[other_end(g, ne, nv)];
        move_to(c, target);
        if (pareto(nearest)) {
          moved = true;
          cl = clusters(g, inc);  // labels shift after a merge
          ci = static_cast<std::size_t>(-1);
          break;
        }
        // A straight edge of length l in unit direction u shrinks under the
        // step s along d exactly when s < 2 l <u, d>; half the smallest bound
        // avoids comparing nearly equal lengths.
        double s_max = kInf;
        for (std::size_t k = 0; k < c.external.size(); ++k)
          s_max = std::min(s_max, 2.0 * before[k] * u[k].dot(*dd.direction));
        const Vec next = start + 0.5 * s_max * *dd.direction;
        if (!(s_max > 0.0) || next == start) {
          move_to(c, start);
          break;
        }
        move_to(c, next);
        moved = true;
      }
    }
    res.total_length.push_back(total_length(g));
    if (!moved) {
      converged = true;
      ++sweeps;
      break;
    }
  }
  res.certificate = certify_conditions(g, tol);
  res.certificate.iterations = sweeps;
  res.certificate.converged = converged;
  {
    std::ostringstream os;
    os << (converged ? "converged" : "not converged") << " after " << sweeps << " sweeps, total length "
       << res.total_length.front() << " -> " << res.total_length.back() << ", worst t* "
       << res.certificate.worst_t_star;
    log.push_back(os.str());
  }
  res.certificate.log.insert(res.certificate.log.begin(), log.begin(), log.end());
  if (!converged) res.certificate.valid = false;
  return res;
}

}  // namespace catmin
