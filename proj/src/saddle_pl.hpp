#pragma once

#include "common.hpp"
#include "metric_core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace catmin {

struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;  // plane is {x : normal . x = offset}
};

struct SaddleVerdict {
  bool saddle = true;
  int planes_tested = 0;
  // Witness when not saddle: the plane, the side (+1 or -1) whose component
  // misses the boundary, how zero vertices were assigned (0 to neither side,
  // +1 to the positive side, -1 to the negative side), and the component.
  std::optional<Plane> witness;
  int side = 0;
  int zero_rule = 0;
  std::vector<int> component;
};

/// Plane-section test for a PL map into 3-space. For a PL function the
/// components of {g > 0} correspond to components of the positive vertices in
/// the mesh graph, so the test runs on vertex signs.
SaddleVerdict is_saddle_pl(const MappedDisc& m, int extra_planes = 0, std::uint64_t seed = 1);

// Vertices on one side of a plane that form a component missing the boundary.
std::optional<std::vector<int>> enclosed_component(const MappedDisc& m, const Plane& plane, int side,
                                                   int zero_rule = 0);

/// The ten-triangle disc: hexagon b0..b5 around central vertices c0, c1, c2.
/// Odd boundary vertices map to the origin, b_{2k} to the tip
/// (R cos t_k, R sin t_k, tau) with t_k = 2 pi k / 3, and c_k to
/// (rho cos(t_k - phi), rho sin(t_k - phi), zeta).
struct HexagonParams {
  double radius = 1.0;
  double rho = 0.3;
  double phi = 0.3;
  double zeta = 0.5;
  double tau = 1.0;
};

MappedDisc hexagon_counterexample(const HexagonParams& p);

struct HexagonSearch {
  HexagonParams params;
  double epsilon = 0.0;  // validated rotation angle
  int candidates = 0;
  int feasible = 0;
};

// Grid search over (rho, phi, zeta, tau) for a configuration that passes the
// saddle test together with all its grid neighbours and shortens under the
// rotation. Deterministic for fixed arguments.
HexagonSearch search_hexagon_parameters(int extra_planes = 200, std::uint64_t seed = 1);

struct ShorteningReport {
  double epsilon = 0.0;
  MappedDisc rotated;
  PseudometricMatrix before;
  PseudometricMatrix after;
  double max_increase = 0.0;  // max of after - before
  double max_decrease = 0.0;  // max of before - after
  bool boundary_unchanged = true;
  bool pareto = false;  // max_increase <= 1e-9
  // Same comparison on the twice-refined mesh graph (observation only).
  double refined_max_increase = 0.0;
};

/// Rotates the images of the central vertices by epsilon about the z-axis
/// and compares vertex length distances before and after.
ShorteningReport shorten_by_rotation(const MappedDisc& m, double epsilon);

// Largest |epsilon| for which the rotation was validated on m: twice the
// angular lag of c0 behind its tip.
double rotation_range(const MappedDisc& m);

}  // namespace catmin
