#pragma once
// Independent reference computations for the tests. Deliberately naive.

#include "metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace catmin::oracle {

// Floyd-Warshall over mesh edges weighted by image distance.
inline std::vector<std::vector<double>> mesh_floyd(const MappedDisc& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      const double w = (m.images[a] - m.images[b]).norm();
      d[a][b] = std::min(d[a][b], w);
      d[b][a] = std::min(d[b][a], w);
    }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Minimum image diameter over all connected vertex subsets containing i and j.
inline std::vector<std::vector<double>> connecting_by_subsets(const std::vector<std::vector<int>>& adj,
                                                              const std::vector<Vec>& images) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<double>> best(n, std::vector<double>(n, kInf));
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    // Connectivity by flood fill inside the mask.
    int start = __builtin_ctz(mask);
    unsigned seen = 1u << start;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : adj[u])
        if ((mask >> w & 1u) && !(seen >> w & 1u)) {
          seen |= 1u << w;
          stack.push_back(w);
        }
    }
    if (seen != mask) continue;
    double diam = 0.0;
    for (int a = 0; a < n; ++a)
      if (mask >> a & 1u)
        for (int b = a + 1; b < n; ++b)
          if (mask >> b & 1u) diam = std::max(diam, (images[a] - images[b]).norm());
    for (int a = 0; a < n; ++a)
      if (mask >> a & 1u)
        for (int b = 0; b < n; ++b)
          if (mask >> b & 1u) best[a][b] = std::min(best[a][b], diam);
  }
  return best;
}

// 0 in conv{u}: by Caratheodory some subset of at most dim+1 points has
// 0 as a convex combination.
inline bool zero_in_hull(const std::vector<Vec>& u, double tol = 1e-12) {
  const int n = static_cast<int>(u.size());
  const int dim = static_cast<int>(u[0].size());
  std::vector<int> pick;
  std::function<bool(int)> rec = [&](int from) -> bool {
    if (!pick.empty()) {
      const int k = static_cast<int>(pick.size());
      Eigen::MatrixXd A(dim + 1, k);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(dim + 1);
      for (int c = 0; c < k; ++c) {
        A.block(0, c, dim, 1) = u[pick[c]];
        A(dim, c) = 1.0;
      }
      b(dim) = 1.0;
      const Eigen::VectorXd lam = A.colPivHouseholderQr().solve(b);
      if ((A * lam - b).norm() <= tol && lam.minCoeff() >= -tol) return true;
    }
    if (static_cast<int>(pick.size()) == dim + 1) return false;
    for (int i = from; i < n; ++i) {
      pick.push_back(i);
      if (rec(i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0);
}

// Distance on a flat cone of total angle `cone` between polar points.
inline double cone_distance(double r1, double th1, double r2, double th2, double cone) {
  double delta = std::fmod(std::abs(th1 - th2), cone);
  delta = std::min(delta, cone - delta);
  if (delta >= kPi) return r1 + r2;
  return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(delta)));
}

// Cut vertices by deleting each vertex and counting components.
inline std::vector<int> articulation_points(int n, const std::vector<std::array<int, 2>>& edges) {
  auto components = [&](int skip) {
    std::vector<int> comp(n, -1);
    int count = 0;
    for (int s = 0; s < n; ++s) {
      if (s == skip || comp[s] >= 0) continue;
      ++count;
      std::vector<int> stack{s};
      comp[s] = count;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (const auto& e : edges)
          for (int k = 0; k < 2; ++k)
            if (e[k] == u) {
              const int w = e[1 - k];
              if (w != skip && comp[w] < 0) {
                comp[w] = count;
                stack.push_back(w);
              }
            }
      }
    }
    return count;
  };
  const int base = components(-1);
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (components(v) > base) out.push_back(v);
  return out;
}

// Observed order from errors at successive halvings of h.
inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace catmin::oracle
