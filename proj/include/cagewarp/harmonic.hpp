// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cagewarp/lattice.hpp"
#include "cagewarp/mesh.hpp"

namespace cagewarp {

enum class NodeClass : std::uint8_t { Exterior = 0, Boundary = 1, Interior = 2 };

struct HarmonicParams {
  /// Convergence when the largest node update of a sweep drops below this.
  double tolerance = 1e-7;
  int max_sweeps = 10000;
  /// Over-relaxation factor; 0 picks 2 / (1 + sin(pi / n)).
  double relaxation = 0.0;
};

/// Harmonic coordinates on a lattice: one scalar field per cage vertex, stored
/// node-major (all vertex weights of node 0, then node 1, ...). Boundary nodes (nodes
/// of cells touched by the cage that are outside or on the surface) hold the hat basis
/// at their closest cage point, interior nodes satisfy the 6-neighbour Laplace
/// equation, exterior nodes hold zero.
struct HarmonicSolution {
  Lattice lattice;
  std::size_t num_vertices = 0;
  std::vector<NodeClass> node_class;
  std::vector<double> weights;
  int sweeps = 0;
  double final_update = 0.0;

  std::span<const double> node_weights(std::size_t node) const {
    return {weights.data() + node * num_vertices, num_vertices};
  }
};

/// Red-black successive over-relaxation of the Laplace problem. All vertex fields are
/// solved together; the initial guess already sums to one at every node, so partition
/// of unity holds to round-off at any sweep count.
///
/// Throws GeometryError when the cage surface reaches the lattice boundary and
/// ConvergenceError after max_sweeps without convergence.
HarmonicSolution hc_grid_solve(const Cage& cage, const Lattice& lattice, const HarmonicParams& params = {});

/// Largest |u - weighted mean of its 6 neighbours| over interior nodes and vertices.
double harmonic_residual(const HarmonicSolution& solution);

}  // namespace cagewarp
