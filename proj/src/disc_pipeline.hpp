#pragma once

#include "common.hpp"
#include "graph_min.hpp"
#include "majorization.hpp"
#include "metric_core.hpp"

#include <cstdint>
#include <vector>

namespace catmin {

/// Union of mesh shortest paths between sample vertices, as a plane graph.
struct GeodesicGraph {
  GraphInTarget graph;
  std::vector<int> mesh_vertex;              // mesh vertex of each graph vertex
  std::vector<std::vector<int>> mesh_path;   // mesh vertices along each edge, endpoints included
  std::vector<int> sample_vertex;            // graph vertex of each sample
  std::vector<std::vector<double>> length;   // mesh length distances between samples
};

// Paths use mesh edges weighted by image length (refinement 1).
GeodesicGraph geodesic_graph(const MappedDisc& m, const std::vector<int>& F);

struct KeyLemmaOptions {
  int q_samples = 10000;
  std::uint64_t seed = 1;
  int subdivision = 8;  // PolyhedralTarget resolution on W
  int max_iter = 10000;
  Tolerances tol;
  double check_tol = 1e-6;
};

struct ShortnessViolation {
  SurfacePoint x, y;
  double target_distance = 0.0;
  double w_distance = 0.0;
};

struct KeyLemmaResult {
  std::vector<int> F;
  std::vector<bool> on_boundary;
  bool one_point = false;
  GeodesicGraph gamma;
  GraphInTarget relaxed;
  MinimizationCertificate certificate;
  GluedDisc disc;
  std::vector<int> p;  // W vertex of each F entry
  std::vector<std::vector<double>> w_distance;  // between p(F)
  double worst_contraction = 0.0;    // max of d_W(p x, p y) - <x - y>
  double worst_boundary_gap = 0.0;   // max over F on the boundary of |q p x - s x|
  int q_sample_count = 0;
  double worst_q_excess = 0.0;       // max of |q x - q y| - d_W(x, y)
  std::vector<ShortnessViolation> q_violations;
  Cat0Report cat0;
  BoundaryArea area;
  std::vector<std::string> log;
  bool pass = false;
};

KeyLemmaResult run_key_lemma(const MappedDisc& m, const std::vector<int>& F, const KeyLemmaOptions& opt = {});

// Image in the target of a point of W under the triangle-wise affine map.
Vec q_map(const GluedDisc& disc, const std::vector<Vec>& points, const PolyhedralTarget& w, const SurfacePoint& x);

struct RefinementStep {
  int shared = 0;
  double distortion = 0.0;    // max |d_k - d_{k+1}| over shared pairs
  double max_increase = 0.0;  // max d_{k+1} - d_k over shared pairs
};

struct RefinementStudy {
  std::vector<KeyLemmaResult> runs;
  std::vector<RefinementStep> steps;
};

RefinementStudy refinement_study(const MappedDisc& m, const std::vector<std::vector<int>>& F_sequence,
                                 const KeyLemmaOptions& opt = {});

}  // namespace catmin
