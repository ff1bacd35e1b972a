#pragma once

#include "graph_min.hpp"
#include "majorization.hpp"
#include "metric_core.hpp"

#include <string>

namespace catmin {

// Parameter domain with its triangulation; Gamma's parameter paths on top
// when given.
std::string svg_parameter_domain(const MappedDisc& m, const GraphInTarget* gamma = nullptr);

// Each triangle of W laid out in the plane on a grid, corners labelled with
// their angles in degrees.
std::string svg_disc_layout(const PolyhedralDisc& w);

}  // namespace catmin
