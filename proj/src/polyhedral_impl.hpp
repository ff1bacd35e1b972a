#pragma once

// Template definitions for polyhedral.hpp.

#include <map>

namespace catmin {

namespace detail {
// Chains the edges lying in exactly one triangle into a single cycle.
void boundary_from_free_edges(PolyhedralDisc& w);
}  // namespace detail

template <class LengthFn>
PolyhedralDisc disc_from_triangles(int num_vertices, const std::vector<std::array<int, 3>>& tris,
                                   LengthFn length) {
  PolyhedralDisc w;
  w.num_vertices = num_vertices;
  std::map<std::pair<int, int>, int> edge_id;
  auto edge = [&](int a, int b) {
    const auto key = a < b ? std::pair{a, b} : std::pair{b, a};
    auto it = edge_id.find(key);
    if (it != edge_id.end()) return it->second;
    const int id = static_cast<int>(w.edges.size());
    w.edges.push_back({key.first, key.second, static_cast<double>(length(key.first, key.second))});
    edge_id.emplace(key, id);
    return id;
  };
  for (const auto& t : tris) {
    PolyTriangle pt;
    pt.v = t;
    for (int k = 0; k < 3; ++k) pt.e[k] = edge(t[k], t[(k + 1) % 3]);
    w.triangles.push_back(pt);
  }
  detail::boundary_from_free_edges(w);
  finalize_disc(w);
  return w;
}

}  // namespace catmin
