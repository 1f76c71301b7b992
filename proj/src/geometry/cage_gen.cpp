// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdint>

#include "cagewarp/surface.hpp"

namespace cagewarp {

namespace {

using Mask = std::vector<std::uint8_t>;

// Box-structuring-element dilation by `radius` nodes, separable along the three axes.
Mask dilate(const Mask& in, const std::array<int, 3>& res, int radius) {
  if (radius <= 0) return in;
  Mask cur = in;
  Mask next(in.size());
  const std::size_t stride[3] = {1, std::size_t(res[0]), std::size_t(res[0]) * res[1]};
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < res[2]; ++k) {
      for (int j = 0; j < res[1]; ++j) {
        for (int i = 0; i < res[0]; ++i) {
          const int c[3] = {i, j, k};
          const std::size_t idx = i + stride[1] * j + stride[2] * k;
          std::uint8_t v = 0;
          const int lo = std::max(0, c[axis] - radius);
          const int hi = std::min(res[axis] - 1, c[axis] + radius);
          for (int t = lo; t <= hi && !v; ++t) v = cur[idx + (t - c[axis]) * static_cast<std::ptrdiff_t>(stride[axis])];
          next[idx] = v;
        }
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace

std::vector<Point3> occupied_nodes(const ScalarGrid& density, double threshold) {
  std::vector<Point3> out;
  for (std::size_t n = 0; n < density.values.size(); ++n) {
    if (density.values[n] >= threshold) out.push_back(density.lattice.node(n));
  }
  return out;
}

GeneratedCage generate_cage(const ScalarGrid& density, const CageGenParams& params) {
  const auto& lat = density.lattice;
  if (params.dilation_cells < 0) throw InvalidArgument("dilation must be non-negative");
  if (params.coarse_res < 2) throw InvalidArgument("coarse resolution must be at least 2");
  for (int a = 0; a < 3; ++a) {
    if (params.coarse_res > lat.res[a]) throw InvalidArgument("coarse resolution exceeds density resolution");
  }

  Mask fine(lat.count());
  bool any = false;
  for (std::size_t n = 0; n < fine.size(); ++n) {
    fine[n] = density.values[n] >= params.occupancy_threshold;
    any = any || fine[n];
  }
  if (!any) throw InvalidArgument("empty occupancy");
  const auto targets = occupied_nodes(density, params.occupancy_threshold);
  fine = dilate(fine, lat.res, params.dilation_cells);

  const int c = params.coarse_res;
  const std::array<int, 3> padded_res{c + 2, c + 2, c + 2};
  Mask coarse(std::size_t(c + 2) * (c + 2) * (c + 2), 0);
  const auto coarse_index = [&](int i, int j, int k) {
    return std::size_t(i) + std::size_t(c + 2) * (std::size_t(j) + std::size_t(c + 2) * k);
  };
  for (int k = 0; k < lat.res[2]; ++k) {
    for (int j = 0; j < lat.res[1]; ++j) {
      for (int i = 0; i < lat.res[0]; ++i) {
        if (!fine[lat.index(i, j, k)]) continue;
        const int bi = std::min(c - 1, i * c / lat.res[0]);
        const int bj = std::min(c - 1, j * c / lat.res[1]);
        const int bk = std::min(c - 1, k * c / lat.res[2]);
        coarse[coarse_index(bi + 1, bj + 1, bk + 1)] = 1;
      }
    }
  }

  // Coarse node b sits at the centre of its block; one empty layer pads every side.
  const Vec3 step = lat.domain.extent() / static_cast<double>(c);
  const Aabb padded_domain = lat.domain.expanded(0.5 * step);
  const Lattice coarse_lattice(padded_res, padded_domain);

  GeneratedCage out;
  for (int extra = 0; extra <= 3; ++extra) {
    ScalarGrid field(coarse_lattice);
    for (std::size_t n = 0; n < coarse.size(); ++n) field.values[n] = coarse[n];
    TriMesh mesh = marching_cubes(field, 0.5);
    if (!is_watertight(mesh)) throw GeometryError("coarse occupancy does not form a single closed component");
    orient_outward(mesh);
    const bool encloses = std::all_of(targets.begin(), targets.end(),
                                      [&](const Point3& p) { return winding_number(mesh, p) >= 0.5; });
    if (encloses) {
      out.mesh = std::move(mesh);
      out.extra_dilation = extra;
      const auto nv = out.mesh.vertices.size();
      if (nv < kCageMinVertices || nv > kCageMaxVertices) {
        out.warning = "cage has " + std::to_string(nv) + " vertices, outside the recommended range 30-200";
      }
      return out;
    }
    // Grow the coarse occupancy by one cell, keeping the padding layer empty.
    Mask grown = dilate(coarse, padded_res, 1);
    for (int k = 0; k < c + 2; ++k) {
      for (int j = 0; j < c + 2; ++j) {
        for (int i = 0; i < c + 2; ++i) {
          if (i == 0 || j == 0 || k == 0 || i == c + 1 || j == c + 1 || k == c + 1) grown[coarse_index(i, j, k)] = 0;
        }
      }
    }
    coarse = std::move(grown);
  }
  throw GeometryError("generated cage does not enclose the occupied region");
}

}  // namespace cagewarp
