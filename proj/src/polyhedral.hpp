#pragma once

#include "common.hpp"
#include "target_space.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace catmin {

struct PolyEdge {
  int a = -1;
  int b = -1;
  double length = 0.0;
};

// A Euclidean triangle of W. Side k joins v[k] and v[(k+1)%3] and is edge e[k].
struct PolyTriangle {
  std::array<int, 3> v{};
  std::array<int, 3> e{};
  std::array<Vec2, 3> corners{};
  bool degenerate = false;
};

/// Space glued from Euclidean triangles along shared edges, plus bare edges
/// (edges in no triangle). Triangles referencing the same edge id are glued
/// along it by arclength.
struct PolyhedralDisc {
  int num_vertices = 0;
  std::vector<PolyEdge> edges;
  std::vector<PolyTriangle> triangles;
  std::vector<int> boundary;  // cyclic edge sequence of the boundary curve
  std::vector<int> boundary_vertices;  // walk start vertices, parallel to `boundary`
  std::vector<double> angle_sum;  // total planar angle at each vertex
  std::vector<bool> interior;     // incident to a triangle and off the boundary curve
};

// Lays out each triangle from its edge lengths and computes angle sums and
// interior flags. Throws when a triangle's sides violate the triangle
// inequality beyond `slack` or the boundary walk does not close up.
void finalize_disc(PolyhedralDisc& w, double slack = 1e-9);

/// Builds a disc from vertex triples; every triangle side gets the length
/// returned by `length(a, b)`. The boundary is the cycle of edges lying in a
/// single triangle (must form one closed curve).
template <class LengthFn>
PolyhedralDisc disc_from_triangles(int num_vertices, const std::vector<std::array<int, 3>>& tris,
                                   LengthFn length);

std::vector<std::string> polyhedral_diagnostics(const PolyhedralDisc& w);

/// Point of W: `cell` < triangles.size() names a triangle and `coords` are
/// barycentric; otherwise cell - triangles.size() indexes the bare edges and
/// coords[0] is the arclength fraction from the edge's `a` end.
struct SurfacePoint {
  int cell = 0;
  Vec3 coords = Vec3(1.0, 0.0, 0.0);
};

/// W as a target space. Distances are shortest paths in a graph whose nodes
/// are the vertices and `subdivision - 1` points per edge, joined by straight
/// chords inside each triangle. The graph path is a genuine path in W, so the
/// value never undershoots; each reported bound is h * (crossings + 1) with h
/// the longest subdivided edge piece.
class PolyhedralTarget final : public TargetSpace<SurfacePoint> {
 public:
  explicit PolyhedralTarget(PolyhedralDisc disc, int subdivision = 16);

  const PolyhedralDisc& disc() const noexcept { return disc_; }
  int subdivision() const noexcept { return subdivision_; }
  double spacing() const noexcept { return spacing_; }

  double distance(const SurfacePoint& p, const SurfacePoint& q) const override;
  SurfacePoint geodesic_eval(const SurfacePoint& p, const SurfacePoint& q, double t) const override;

  struct Measured {
    double distance = 0.0;
    double bound = 0.0;
  };
  Measured measure(const SurfacePoint& p, const SurfacePoint& q) const;

  // Upper estimates of the distance from p to every node.
  std::vector<double> distances_from(const SurfacePoint& p) const;

  SurfacePoint vertex_point(int v) const;
  SurfacePoint edge_point(int edge, double t) const;

  // Node-level access for batched queries.
  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  int vertex_node(int v) const { return v; }
  SurfacePoint node_point(int node) const;

  struct Tree {
    int source = -1;
    std::vector<double> dist;
    std::vector<int> pred;
    std::vector<int> hops;  // nodes strictly between source and each node
  };
  Tree shortest_tree(int source) const;
  std::vector<int> path_to(const Tree& tree, int target) const;  // source first
  double node_bound(const Tree& tree, int target) const {
    return target == tree.source ? 0.0 : spacing_ * (tree.hops[target] + 1);
  }

  // Planar/linear position of a point inside one of its cells.
  struct Incidence {
    int cell;
    Vec3 coords;
  };
  const std::vector<Incidence>& incidences(int node) const { return nodes_[node]; }

 private:
  struct Arc {
    int to;
    double w;
  };
  struct Seeded {
    std::vector<double> dist;
    std::vector<int> pred;
    std::vector<int> hops;
  };
  Seeded seed_and_run(const SurfacePoint& p) const;
  double within_cell(int cell, const Vec3& a, const Vec3& b) const;
  std::vector<int> cell_nodes(int cell) const { return cell_nodes_[cell]; }
  void check(const SurfacePoint& p) const;

  PolyhedralDisc disc_;
  int subdivision_;
  double spacing_ = 0.0;
  std::vector<int> bare_edges_;
  std::vector<std::vector<Incidence>> nodes_;
  std::vector<std::vector<int>> cell_nodes_;
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace catmin

#include "polyhedral_impl.hpp"
