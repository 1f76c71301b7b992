// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cagewarp/voxelize.hpp"

namespace cagewarp {

namespace {

struct Stencil {
  std::ptrdiff_t offset[6];
  double coeff[6];
};

Stencil make_stencil(const Lattice& lat) {
  const Vec3 h = lat.spacing();
  const double wx = 1.0 / (h.x * h.x);
  const double wy = 1.0 / (h.y * h.y);
  const double wz = 1.0 / (h.z * h.z);
  const double total = 2.0 * (wx + wy + wz);
  const std::ptrdiff_t sy = lat.res[0];
  const std::ptrdiff_t sz = std::ptrdiff_t(lat.res[0]) * lat.res[1];
  return {{-1, 1, -sy, sy, -sz, sz}, {wx / total, wx / total, wy / total, wy / total, wz / total, wz / total}};
}

}  // namespace

HarmonicSolution hc_grid_solve(const Cage& cage, const Lattice& lat, const HarmonicParams& params) {
  const std::size_t nv = cage.num_vertices();
  HarmonicSolution sol;
  sol.lattice = lat;
  sol.num_vertices = nv;
  sol.node_class.assign(lat.count(), NodeClass::Exterior);
  sol.weights.assign(lat.count() * nv, 0.0);

  const auto cut = surface_cells(cage.mesh(), lat);
  const auto inside = inside_nodes(cage.mesh(), lat);

  for (int k = 0; k + 1 < lat.res[2]; ++k) {
    for (int j = 0; j + 1 < lat.res[1]; ++j) {
      for (int i = 0; i + 1 < lat.res[0]; ++i) {
        if (!cut[cell_index(lat, i, j, k)]) continue;
        if (i == 0 || j == 0 || k == 0 || i + 2 == lat.res[0] || j + 2 == lat.res[1] || k + 2 == lat.res[2]) {
          throw GeometryError("cage surface touches the harmonic solve domain boundary");
        }
        for (const auto n : lat.stencil({i, j, k})) sol.node_class[n] = NodeClass::Boundary;
      }
    }
  }

  // Cut-cell nodes strictly inside the cage stay unknowns: every edge from an interior
  // node to a non-interior one crosses the surface, so its far end is still a cut-cell
  // node and the Laplace stencil stays closed.
  const double on_surface = 1e-9 * lat.cell_diagonal();
  for (std::size_t n = 0; n < lat.count(); ++n) {
    if (sol.node_class[n] == NodeClass::Boundary && inside[n] && cage.closest(lat.node(n)).distance > on_surface) {
      sol.node_class[n] = NodeClass::Exterior;
    }
  }

  std::vector<std::size_t> colored[2];
  for (std::size_t n = 0; n < lat.count(); ++n) {
    if (sol.node_class[n] == NodeClass::Boundary) {
      // Dirichlet value: piecewise-linear hat basis at the closest cage point.
      const auto hat = cage.surface_value(lat.node(n));
      for (int v = 0; v < hat.count; ++v) sol.weights[n * nv + hat.vertex[v]] += hat.weight[v];
    } else if (inside[n]) {
      sol.node_class[n] = NodeClass::Interior;
      const auto c = lat.coords(n);
      colored[(c[0] + c[1] + c[2]) & 1].push_back(n);
      std::fill_n(sol.weights.begin() + n * nv, nv, 1.0 / static_cast<double>(nv));
    }
  }

  const Stencil st = make_stencil(lat);
  const int nmax = std::max({lat.res[0], lat.res[1], lat.res[2]});
  const double omega = params.relaxation > 0.0 ? params.relaxation
                                               : 2.0 / (1.0 + std::sin(std::numbers::pi / static_cast<double>(nmax)));
  double* u = sol.weights.data();
  std::vector<double> avg(nv);
  for (int sweep = 1; sweep <= params.max_sweeps; ++sweep) {
    double max_update = 0.0;
    for (const auto& nodes : colored) {
      for (const std::size_t n : nodes) {
        double* un = u + n * nv;
        std::fill(avg.begin(), avg.end(), 0.0);
        for (int s = 0; s < 6; ++s) {
          const double* nb = u + (static_cast<std::ptrdiff_t>(n) + st.offset[s]) * static_cast<std::ptrdiff_t>(nv);
          const double c = st.coeff[s];
          for (std::size_t j = 0; j < nv; ++j) avg[j] += c * nb[j];
        }
        for (std::size_t j = 0; j < nv; ++j) {
          const double delta = omega * (avg[j] - un[j]);
          un[j] += delta;
          max_update = std::max(max_update, std::abs(delta));
        }
      }
    }
    sol.sweeps = sweep;
    sol.final_update = max_update;
    if (max_update < params.tolerance) return sol;
  }
  throw ConvergenceError("harmonic coordinates did not converge within " + std::to_string(params.max_sweeps) +
                         " sweeps");
}

double harmonic_residual(const HarmonicSolution& sol) {
  const Stencil st = make_stencil(sol.lattice);
  const std::size_t nv = sol.num_vertices;
  double worst = 0.0;
  for (std::size_t n = 0; n < sol.node_class.size(); ++n) {
    if (sol.node_class[n] != NodeClass::Interior) continue;
    for (std::size_t j = 0; j < nv; ++j) {
      double avg = 0.0;
      for (int s = 0; s < 6; ++s) avg += st.coeff[s] * sol.weights[(n + st.offset[s]) * nv + j];
      worst = std::max(worst, std::abs(sol.weights[n * nv + j] - avg));
    }
  }
  return worst;
}

}  // namespace cagewarp
