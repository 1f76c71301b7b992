// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "cagewarp/lattice.hpp"
#include "cagewarp/mesh.hpp"

namespace cagewarp {

/// Iso-surface of a scalar lattice by marching cubes. Vertices are shared between
/// neighbouring cells (one per crossed lattice edge), so the result is watertight
/// whenever the surface stays off the lattice boundary. Faces are oriented with
/// normals pointing toward decreasing scalar values.
TriMesh marching_cubes(const ScalarGrid& grid, double iso);

struct CageGenParams {
  double occupancy_threshold = 1.0;
  int dilation_cells = 2;
  int coarse_res = 8;
};

struct GeneratedCage {
  TriMesh mesh;
  /// Coarse dilation rounds added on top of the requested parameters to reach enclosure.
  int extra_dilation = 0;
  /// Set when the vertex count falls outside the 30..200 budget.
  std::optional<std::string> warning;
};

inline constexpr std::size_t kCageMinVertices = 30;
inline constexpr std::size_t kCageMaxVertices = 200;

/// Coarse enclosing cage: threshold -> binary occupancy -> dilation -> max-pool to
/// coarse_res^3 -> marching cubes at 0.5. Every node with density >= threshold is
/// verified to lie inside the result.
///
/// Throws InvalidArgument("empty occupancy") when no node reaches the threshold and
/// GeometryError when the coarse occupancy splits into several components.
GeneratedCage generate_cage(const ScalarGrid& density, const CageGenParams& params);

/// Nodes whose value reaches `threshold`, as positions.
std::vector<Point3> occupied_nodes(const ScalarGrid& density, double threshold);

}  // namespace cagewarp
