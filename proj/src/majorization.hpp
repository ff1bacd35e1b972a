#pragma once

#include "common.hpp"
#include "graph_min.hpp"
#include "polyhedral.hpp"
#include "target_space.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace catmin {

/// Planar triangle with sides a = |c0 c1|, b = |c1 c2|, c = |c2 c0|.
struct ComparisonTriangle {
  double a = 0.0, b = 0.0, c = 0.0;
  std::array<Vec2, 3> corners{};
  std::array<double, 3> angles{};  // at corners 0, 1, 2
  bool degenerate = false;
  double area() const;
};

ComparisonTriangle comparison_triangle(double a, double b, double c);

struct FaceMajorant {
  std::vector<std::array<int, 3>> fan;  // indices into the loop
  std::vector<ComparisonTriangle> triangles;
  std::vector<double> planar_angle;  // per loop corner, summed over the fan
  std::vector<double> target_angle;  // angle between the two sides in the target (NaN if undefined)
  bool witness_ok = true;
};

/// Fan of comparison triangles from loop[0] over a closed geodesic polygon.
/// `scale` is the fraction of the shorter adjacent side at which target
/// angles are measured.
template <class Point>
FaceMajorant face_majorant(const TargetSpace<Point>& X, const std::vector<Point>& loop, double angle_tol = 1e-6,
                           double scale = 0.25) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) fail_input("face_majorant: polygon needs at least three corners");
  FaceMajorant fm;
  fm.planar_angle.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    const double a = X.distance(loop[0], loop[i]);
    const double b = X.distance(loop[i], loop[i + 1]);
    const double c = X.distance(loop[i + 1], loop[0]);
    fm.fan.push_back({0, i, i + 1});
    fm.triangles.push_back(comparison_triangle(a, b, c));
    const auto& t = fm.triangles.back();
    fm.planar_angle[0] += t.angles[0];
    fm.planar_angle[i] += t.angles[1];
    fm.planar_angle[i + 1] += t.angles[2];
  }
  fm.target_angle.assign(n, std::nan(""));
  for (int k = 0; k < n; ++k) {
    const Point& prev = loop[(k + n - 1) % n];
    const Point& next = loop[(k + 1) % n];
    const double s = std::min(X.distance(loop[k], prev), X.distance(loop[k], next));
    if (!(s > 0.0)) continue;
    fm.target_angle[k] = X.local_angle(loop[k], prev, next, scale * s);
    if (fm.planar_angle[k] < fm.target_angle[k] - angle_tol) fm.witness_ok = false;
  }
  return fm;
}

/// W glued from majorants of the bounded faces of a plane graph. W's vertex
/// and edge ids extend those of the graph; fan diagonals are appended.
struct GluedDisc {
  PolyhedralDisc w;
  FaceSet faces;
  std::vector<int> triangle_face;  // bounded face owning each triangle of w
  std::vector<int> bare_edges;     // graph edges in no triangle
  std::vector<FaceMajorant> majorants;  // per face; empty for the outer face and unfilled faces
  bool witness_ok = true;
  double max_gluing_mismatch = 0.0;
};

GluedDisc glue_disc(const GraphInTarget& g, const Tolerances& tol = {});

// Vertices joined by edges of length <= tol.zero are one point of W; angle
// sums are taken over these classes, and triangles collapsed to a segment add
// no angle.
struct Cat0Report {
  std::vector<std::pair<int, double>> interior_angles;  // (class representative, angle sum)
  std::vector<std::vector<int>> merged;  // classes with more than one vertex
  double worst_deficit = 0.0;  // max of 2*pi - angle sum, 0 if no interior vertex
  bool simply_connected = false;
  std::vector<std::string> problems;
  bool pass = false;
};

Cat0Report cat0_certificate(const PolyhedralDisc& w, const Tolerances& tol = {});

struct ThinTriangleReport {
  int samples = 0;
  double worst_excess = -kInf;  // max of d(x, y) - comparison distance
  double worst_margin = -kInf;  // max of excess - allowance
  double allowance_at_worst = 0.0;
  std::array<int, 3> worst_triangle{-1, -1, -1};  // nodes p, q, r
  bool violation = false;  // some margin > 0
};

ThinTriangleReport thin_triangle_test(const PolyhedralTarget& w, int samples, std::uint64_t seed);

struct BoundaryArea {
  double length = 0.0;
  double area = 0.0;
  bool isoperimetric = false;  // area <= length^2 / (4 pi) + 1e-9
};

BoundaryArea boundary_and_area(const PolyhedralDisc& w);

struct CutReport {
  std::vector<int> cut_vertices;           // sorted
  std::vector<std::vector<int>> blocks;    // sorted vertex sets of 2-connected blocks
};

CutReport cut_vertices(const PolyhedralDisc& w);

struct EpsilonNet {
  double epsilon = 0.0;
  double boundary_length = 0.0;
  int boundary_points = 0;
  std::vector<int> interior_nodes;  // greedy additions, node ids of the target
  int size = 0;
  double bound = 0.0;  // 4 (l/eps)^2 + ceil(10 l/eps), l = L/(2 pi)
  double covering_radius = 0.0;  // max node distance to the net
};

EpsilonNet epsilon_net(const PolyhedralTarget& w, double epsilon);

}  // namespace catmin
