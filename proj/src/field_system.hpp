#pragma once

#include "common.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace catmin {

/// Map s from a square grid of the parameter plane into 3-space. Node (i, j)
/// sits at (x0 + i h, y0 + j h) and is stored at j * nx + i.
struct HeightFieldPatch {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 0.0;
  std::vector<Vec3> s;

  const Vec3& at(int i, int j) const { return s[static_cast<std::size_t>(j) * nx + i]; }
  Vec2 param(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
};

std::vector<std::string> patch_diagnostics(const HeightFieldPatch& p);

HeightFieldPatch sample_patch(const std::function<Vec3(double, double)>& f, double x0, double y0, double h, int nx,
                              int ny);

// z = x^2 - y^2 in asymptotic coordinates: s(u, v) = ((u+v)/2, (u-v)/2, uv),
// over [-half_width, half_width]^2.
HeightFieldPatch hyperbolic_paraboloid_patch(double half_width, double h);

/// Parameter-plane derivative of a grid function: central differences inside,
/// second-order one-sided differences on the border.
template <class T>
std::array<T, 2> grid_gradient(const std::vector<T>& f, int nx, int ny, double h, int i, int j) {
  auto d = [&](int n, int k, auto get) -> T {
    if (k > 0 && k < n - 1) return (get(k + 1) - get(k - 1)) / (2.0 * h);
    if (k == 0) return (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h);
    return (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * h);
  };
  const std::size_t row = static_cast<std::size_t>(j) * nx;
  return {d(nx, i, [&](int k) -> T { return f[row + k]; }),
          d(ny, j, [&](int k) -> T { return f[static_cast<std::size_t>(k) * nx + i]; })};
}

struct FrameNode {
  double k1 = 0.0, k2 = 0.0;  // k1 > 0 > k2 on strictly saddle nodes
  Vec3 normal = Vec3::Zero();
  Vec3 e1 = Vec3::Zero(), e2 = Vec3::Zero();  // unit principal vectors
  Vec3 a1 = Vec3::Zero(), a2 = Vec3::Zero();  // ds of the asymptotic parameter directions
  Vec2 e1p = Vec2::Zero(), e2p = Vec2::Zero();  // parameter vectors with ds(eip) = ei
  Vec2 a1p = Vec2::Zero(), a2p = Vec2::Zero();  // unit parameter vectors
};

/// Principal and asymptotic frames at every node. Throws with the node
/// location unless k1 k2 < -tol everywhere.
std::vector<FrameNode> curvature_frame(const HeightFieldPatch& p, double tol = 1e-9);

/// Four parameter-plane vector fields; v[2] = lambda1 a1, v[3] = lambda2 a2.
struct FieldArray {
  int nx = 0;
  int ny = 0;
  std::array<std::vector<Vec2>, 4> v;
  std::vector<double> lambda1, lambda2;
};

// Sum over fields of the trapezoidal integral of |ds(v_i)|^2.
double energy(const HeightFieldPatch& p, const FieldArray& v);

// v_i(v_i s) on every node (one-sided stencils on the border).
std::vector<Vec3> field_second_derivative(const HeightFieldPatch& p, const FieldArray& v, int i);

/// sum_i v_i(v_i s), by nested differences. Entries on border nodes are zero;
/// only interior nodes carry the operator.
std::vector<Vec3> laplacian(const HeightFieldPatch& p, const FieldArray& v);
double max_interior_norm(const HeightFieldPatch& p, const std::vector<Vec3>& field);

struct FieldSolution {
  FieldArray fields;
  double min_lambda = 0.0;
  double max_tangency_residual = 0.0;  // normal part of v1(v1 s) + v2(v2 s)
};

/// Solves for w = (lambda1^2, lambda2^2) along the characteristics of the
/// asymptotic coordinates, starting from w = (1, 1) on the anti-diagonal.
/// Requires a square grid whose coordinate directions are asymptotic.
FieldSolution solve_field_system(const HeightFieldPatch& p);

struct PerturbationTrial {
  double energy = 0.0;       // E_v of the perturbed map
  double delta = 0.0;        // energy - E_v(s)
  double convexity_gap = 0.0;  // min over t of (1-t) E0 + t E1 - E(s_t)
};

struct PerturbationReport {
  double base_energy = 0.0;
  std::vector<PerturbationTrial> trials;
  double min_delta = 0.0;
  double min_convexity_gap = 0.0;
  bool no_decrease = true;  // all deltas >= -1e-9
  bool convex = true;       // all gaps >= -1e-12 scale
};

/// Random perturbations sum_m c_m sin(k_m pi x) sin(l_m pi y) vanishing on the
/// patch border; convexity is checked at t = 0.25, 0.5, 0.75.
PerturbationReport perturbation_evidence(const HeightFieldPatch& p, const FieldArray& v, int trials,
                                         std::uint64_t seed, double amplitude = 0.05);

}  // namespace catmin
