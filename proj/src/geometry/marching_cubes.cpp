// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <unordered_map>

#include "cagewarp/surface.hpp"
#include "mc_tables.hpp"

namespace cagewarp {

namespace {

constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdge[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                              {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

TriMesh marching_cubes(const ScalarGrid& grid, double iso) {
  const auto& lat = grid.lattice;
  if (lat.res[0] < 2 || lat.res[1] < 2 || lat.res[2] < 2 || grid.values.size() != lat.count()) {
    throw InvalidArgument("marching cubes needs a grid of at least 2x2x2 nodes");
  }
  TriMesh mesh;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;

  // Lattice edge id: 3 * (lower node index) + axis.
  auto vertex_on_edge = [&](const std::array<int, 3>& a, const std::array<int, 3>& b) {
    int axis = 0;
    while (a[axis] == b[axis]) ++axis;
    const auto& lo = a[axis] < b[axis] ? a : b;
    const auto& hi = a[axis] < b[axis] ? b : a;
    const std::uint64_t key = 3 * std::uint64_t(lat.index(lo[0], lo[1], lo[2])) + axis;
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const double f0 = grid.at(lo[0], lo[1], lo[2]);
    const double f1 = grid.at(hi[0], hi[1], hi[2]);
    double t = (f1 != f0) ? (iso - f0) / (f1 - f0) : 0.5;
    // Keep vertices off lattice nodes so no triangle collapses.
    t = std::clamp(t, 1e-7, 1.0 - 1e-7);
    const Point3 p0 = lat.node(lo[0], lo[1], lo[2]);
    const Point3 p1 = lat.node(hi[0], hi[1], hi[2]);
    mesh.vertices.push_back(p0 + t * (p1 - p0));
    const auto id = static_cast<std::uint32_t>(mesh.vertices.size() - 1);
    edge_vertex.emplace(key, id);
    return id;
  };

  for (int k = 0; k + 1 < lat.res[2]; ++k) {
    for (int j = 0; j + 1 < lat.res[1]; ++j) {
      for (int i = 0; i + 1 < lat.res[0]; ++i) {
        int case_index = 0;
        std::array<std::array<int, 3>, 8> corner;
        for (int c = 0; c < 8; ++c) {
          corner[c] = {i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]};
          if (grid.at(corner[c][0], corner[c][1], corner[c][2]) < iso) case_index |= 1 << c;
        }
        const int* tri = detail::kMcTriTable[case_index];
        for (int t = 0; tri[t] != -1; t += 3) {
          Face f;
          for (int v = 0; v < 3; ++v) {
            const auto& e = kEdge[tri[t + v]];
            f[v] = vertex_on_edge(corner[e[0]], corner[e[1]]);
          }
          mesh.faces.push_back(f);
        }
      }
    }
  }
  return mesh;
}

}  // namespace cagewarp
