#pragma once

#include "common.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace catmin {

/// Finite graph mapped into Euclidean space, with a pinned vertex set and an
/// optional planar rotation system.
struct GraphInTarget {
  std::vector<Vec> points;
  std::vector<std::array<int, 2>> edges;
  // Interior polyline points of each edge's realization; empty means the
  // edge is realized by the segment between its endpoint images.
  std::vector<std::vector<Vec>> realizations;
  std::vector<bool> pinned;
  // Incident edge ids of each vertex in counterclockwise order; empty when absent.
  std::vector<std::vector<int>> rotation;
  // Optional planar embedding (parameter positions and per-edge polylines from
  // edges[e][0] to edges[e][1], endpoints included), used for face
  // orientation and drawings.
  std::vector<Vec2> param;
  std::vector<std::vector<Vec2>> param_paths;

  std::size_t size() const noexcept { return points.size(); }
  bool has_rotation() const noexcept { return !rotation.empty(); }
  double edge_length(int e) const { return (points[edges[e][0]] - points[edges[e][1]]).norm(); }
  double realized_length(int e) const;
};

std::vector<std::string> graph_diagnostics(const GraphInTarget& g, bool allow_empty_pinned = false);

// Counterclockwise rotation from the parameter embedding: edges are ordered by
// the direction of their first polyline segment (or of the straight segment).
std::vector<std::vector<int>> rotation_from_embedding(const GraphInTarget& g);

struct Face {
  std::vector<int> vertices;  // walk start vertices
  std::vector<int> edges;     // edges[k] joins vertices[k] and vertices[k+1]
  double param_area = 0.0;    // signed, counterclockwise positive
};

struct FaceSet {
  std::vector<Face> faces;
  int outer = -1;
};

// Face walks of the rotation system (face kept on the left of each dart). The
// outer face is the one with the most negative parameter area, or the longest
// walk when no embedding is present.
FaceSet extract_faces(const GraphInTarget& g);

GraphInTarget straighten(const GraphInTarget& g);

struct DescentDirection {
  double t_star = 0.0;
  std::optional<Vec> direction;
};

/// max t subject to <d, u_i> >= t for all i, |d| <= 1. Computed through the
/// minimum-norm point z of conv{u_i}: t* = |z| and d = z/|z| when z != 0,
/// otherwise t* = 0 and no descent direction exists.
DescentDirection descent_direction(const std::vector<Vec>& unit_vectors);

// Minimum-norm point of the convex hull of `points` (Wolfe's algorithm).
Vec min_norm_point(const std::vector<Vec>& points);

struct VertexCertificate {
  int vertex = -1;
  double t_star = 0.0;
  double angle_sum = 0.0;
  bool degenerate = false;   // shares its image with the vertices in `merged`
  std::vector<int> merged;   // other vertices of the cluster, certified together
};

struct MinimizationCertificate {
  std::vector<double> edge_residual;
  std::vector<VertexCertificate> free_vertices;
  int iterations = 0;
  bool converged = true;
  std::vector<std::string> log;
  double worst_t_star = 0.0;
  double worst_residual = 0.0;
  double worst_angle_deficit = 0.0;  // max over checked vertices of 2*pi - angle sum
  bool valid = false;
};

MinimizationCertificate certify_conditions(const GraphInTarget& g, const Tolerances& tol = {});

struct RelaxResult {
  GraphInTarget graph;
  MinimizationCertificate certificate;
  std::vector<double> total_length;  // after each sweep, starting with the input
};

/// Gauss-Seidel Pareto descent over free vertices in ascending index order.
RelaxResult relax(const GraphInTarget& g, const Tolerances& tol = {}, int max_iter = 10000);

}  // namespace catmin
