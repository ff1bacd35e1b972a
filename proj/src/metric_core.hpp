#pragma once

#include "common.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace catmin {

// Symmetric n x n matrix of pairwise pseudodistances. Entries may be +inf.
class PseudometricMatrix {
 public:
  PseudometricMatrix() = default;
  explicit PseudometricMatrix(std::size_t n, double fill = 0.0)
      : n_(n), d_(n * n, fill) {
    for (std::size_t i = 0; i < n; ++i) d_[i * n + i] = 0.0;
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }

  // Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

  const std::vector<double>& row_major() const noexcept { return d_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

struct PseudometricCheck {
  bool ok = true;
  double worst_diagonal = 0.0;
  double worst_asymmetry = 0.0;
  double worst_triangle_excess = 0.0;  // max of d(i,k) - d(i,j) - d(j,k) over finite triples
  bool negative_entry = false;
};

PseudometricCheck verify_pseudometric(const PseudometricMatrix& p, double tol = 1e-9);

/// Triangulated parameter disc with a PL map into Euclidean space. The image of
/// each triangle is the affine image of its corners.
struct MappedDisc {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_loop;
  std::vector<Vec> images;

  std::size_t size() const noexcept { return vertices.size(); }
  int dimension() const noexcept {
    return images.empty() ? 0 : static_cast<int>(images.front().size());
  }
};

// Sorted, deterministic diagnostics; empty when the disc is valid.
std::vector<std::string> disc_diagnostics(const MappedDisc& m);
// Throws Error(InvalidInput) carrying the first diagnostic.
void require_valid_disc(const MappedDisc& m);

using Adjacency = std::vector<std::vector<int>>;

std::vector<std::array<int, 2>> mesh_edges(const MappedDisc& m);
Adjacency mesh_adjacency(const MappedDisc& m);
std::vector<bool> boundary_mask(const MappedDisc& m);

/// Graph over mesh vertices plus `refinement - 1` subdivision nodes per mesh
/// edge. Nodes sharing a triangle are joined by chords weighted with the
/// length of their (straight) image. Nodes 0..n-1 are the mesh vertices.
struct RefinedGraph {
  std::vector<Vec> images;
  std::vector<std::vector<std::pair<int, double>>> adj;
};

RefinedGraph refined_graph(const MappedDisc& m, int refinement);

// Single-source shortest paths; `pred` receives predecessor nodes when non-null.
std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int source, std::vector<int>* pred = nullptr);

PseudometricMatrix length_pseudometric(const MappedDisc& m, int refinement = 1);

struct ConnectingResult {
  PseudometricMatrix value;  // exact, or the upper end of the bracket
  PseudometricMatrix lower;  // equals `value` when exact
  bool exact = true;
};

/// Largest vertex count for which the connecting pseudometric is computed exactly.
inline constexpr std::size_t kConnectingExactLimit = 14;

ConnectingResult connecting_pseudometric(const Adjacency& adj, const std::vector<Vec>& images,
                                         double zero_tol = 1e-9);
ConnectingResult connecting_pseudometric(const MappedDisc& m, double zero_tol = 1e-9);

PseudometricMatrix intrinsic_pseudometric(const MappedDisc& m, double zero_tol = 1e-9,
                                          int refinement = 1);

struct QuotientSpace {
  std::vector<int> class_of;
  std::vector<int> representatives;  // smallest member of each class
  PseudometricMatrix metric;
  double worst_triangle_excess = 0.0;
  bool triangle_ok = true;  // false when excess > 2*tol: tol was too large
};

QuotientSpace metric_quotient(const PseudometricMatrix& p, double tol);

// Classes of the relation d < inf, each sorted, ordered by smallest member.
std::vector<std::vector<int>> metric_components(const PseudometricMatrix& p);

struct MonotoneLightReport {
  std::vector<int> class_of;
  std::vector<std::vector<int>> classes;
  std::vector<bool> class_connected;
  std::vector<std::array<int, 2>> light_violations;  // mesh edges joining distinct classes with equal images
  bool monotone = true;
  bool light = true;
};

MonotoneLightReport monotone_light_report(const MappedDisc& m, double zero_tol = 1e-9);

struct BubbleWitness {
  int center = -1;  // vertex whose image is the removed ball's center
  std::vector<int> component;
};

std::vector<BubbleWitness> no_bubble_check(const MappedDisc& m, double radius);

}  // namespace catmin
