#pragma once
// Seeded random instances shared by the unit and acceptance tests.

#include "graph_min.hpp"
#include "metric_core.hpp"

#include <random>

namespace catmin::testgen {

// nx x ny grid on [0,1]^2 with random diagonals; images in R^dim. Some
// images are snapped together so that connecting classes are non-trivial.
inline MappedDisc random_grid_disc(std::mt19937_64& rng, int nx, int ny, int dim, double snap = 0.2) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5), snap_coin(snap);
  MappedDisc m;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.vertices.emplace_back(static_cast<double>(i) / (nx - 1), static_cast<double>(j) / (ny - 1));
      Vec p(dim);
      for (int k = 0; k < dim; ++k) p[k] = U(rng);
      m.images.push_back(p);
    }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const int a = j * nx + i, b = a + 1, c = a + nx + 1, d = a + nx;
      if (coin(rng)) {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
      } else {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, c, d});
      }
    }
  for (int i = 0; i < nx; ++i) m.boundary_loop.push_back(i);
  for (int j = 1; j < ny; ++j) m.boundary_loop.push_back(j * nx + nx - 1);
  for (int i = nx - 2; i >= 0; --i) m.boundary_loop.push_back((ny - 1) * nx + i);
  for (int j = ny - 2; j >= 1; --j) m.boundary_loop.push_back(j * nx);
  // Snap along mesh edges: copy a neighbour's image.
  for (const auto& e : mesh_edges(m))
    if (snap_coin(rng)) m.images[e[1]] = m.images[e[0]];
  return m;
}

// Saddle-like height field over a grid: z = a x^2 - b y^2 plus noise.
inline MappedDisc random_saddle_disc(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(0.3, 1.0), noise(-0.02, 0.02);
  MappedDisc m = random_grid_disc(rng, n, n, 3, 0.0);
  const double a = U(rng), b = U(rng);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = 2.0 * m.vertices[i].x() - 1.0, y = 2.0 * m.vertices[i].y() - 1.0;
    m.images[i] = Vec3(x, y, a * x * x - b * y * y + noise(rng));
  }
  return m;
}

// Mesh 1-skeleton as a plane graph: boundary pinned at its images, interior
// vertices free at random positions.
inline GraphInTarget random_skeleton_graph(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  MappedDisc m = random_grid_disc(rng, n, n, dim, 0.0);
  GraphInTarget g;
  const auto boundary = boundary_mask(m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    g.points.push_back(m.images[i]);
    g.pinned.push_back(boundary[i]);
    g.param.push_back(m.vertices[i]);
  }
  for (const auto& e : mesh_edges(m)) g.edges.push_back(e);
  g.rotation = rotation_from_embedding([&] {
    GraphInTarget planar = g;
    for (std::size_t i = 0; i < m.size(); ++i) planar.points[i] = Vec(m.vertices[i]);
    return planar;
  }());
  return g;
}

// Connected random graph: a random spanning tree plus extra edges.
inline Adjacency random_connected_graph(std::mt19937_64& rng, int n, double extra) {
  Adjacency adj(n);
  std::bernoulli_distribution coin(extra);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    const int u = pick(rng);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng) && std::find(adj[a].begin(), adj[a].end(), b) == adj[a].end()) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
  return adj;
}

}  // namespace catmin::testgen
