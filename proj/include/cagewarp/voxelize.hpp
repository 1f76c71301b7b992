// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "cagewarp/lattice.hpp"
#include "cagewarp/mesh.hpp"

namespace cagewarp {

/// Inside flag per lattice node for a watertight mesh. Rows along x are classified by
/// signed crossing counts; rows that pass within round-off of a mesh edge fall back
/// to the winding number node by node.
std::vector<std::uint8_t> inside_nodes(const TriMesh& mesh, const Lattice& lattice);

/// Flag per lattice cell ((res - 1)^3, x-fastest) set when a mesh triangle overlaps it.
std::vector<std::uint8_t> surface_cells(const TriMesh& mesh, const Lattice& lattice);

inline std::size_t cell_index(const Lattice& l, int i, int j, int k) {
  return std::size_t(i) + std::size_t(l.res[0] - 1) * (std::size_t(j) + std::size_t(l.res[1] - 1) * std::size_t(k));
}

}  // namespace cagewarp
