// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/voxelize.hpp"

#include <algorithm>
#include <cmath>

namespace cagewarp {

std::vector<std::uint8_t> inside_nodes(const TriMesh& mesh, const Lattice& lat) {
  std::vector<std::uint8_t> inside(lat.count(), 0);
  const Vec3 h = lat.spacing();
  struct Crossing {
    double x;
    int sign;
  };
  std::vector<Crossing> crossings;
  for (int k = 0; k < lat.res[2]; ++k) {
    const double z = lat.domain.min.z + k * h.z;
    for (int j = 0; j < lat.res[1]; ++j) {
      const double y = lat.domain.min.y + j * h.y;
      crossings.clear();
      bool ambiguous = false;
      for (const auto& f : mesh.faces) {
        const Point3& a = mesh.vertices[f[0]];
        const Point3& b = mesh.vertices[f[1]];
        const Point3& c = mesh.vertices[f[2]];
        if (std::max({a.y, b.y, c.y}) < y || std::min({a.y, b.y, c.y}) > y) continue;
        if (std::max({a.z, b.z, c.z}) < z || std::min({a.z, b.z, c.z}) > z) continue;
        // Barycentrics of (y, z) in the triangle's yz projection.
        const double area = (b.y - a.y) * (c.z - a.z) - (c.y - a.y) * (b.z - a.z);
        const double scale = std::max({std::abs(b.y - a.y), std::abs(c.y - a.y), std::abs(b.z - a.z),
                                       std::abs(c.z - a.z)});
        if (std::abs(area) <= 1e-14 * scale * scale) {
          continue;  // parallel to x: the row meets it only along an edge shared with a crossing face
        }
        const double w1 = ((y - a.y) * (c.z - a.z) - (c.y - a.y) * (z - a.z)) / area;
        const double w2 = ((b.y - a.y) * (z - a.z) - (y - a.y) * (b.z - a.z)) / area;
        const double w0 = 1.0 - w1 - w2;
        constexpr double tol = 1e-10;
        if (w0 < -tol || w1 < -tol || w2 < -tol) continue;
        if (w0 <= tol || w1 <= tol || w2 <= tol) {
          ambiguous = true;
          break;
        }
        crossings.push_back({w0 * a.x + w1 * b.x + w2 * c.x, area > 0.0 ? 1 : -1});
      }
      if (ambiguous) {
        for (int i = 0; i < lat.res[0]; ++i) {
          inside[lat.index(i, j, k)] = winding_number(mesh, lat.node(i, j, k)) >= 0.5;
        }
        continue;
      }
      // Outward normal with positive x component means the +x ray exits there.
      std::sort(crossings.begin(), crossings.end(), [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
      for (int i = 0; i < lat.res[0]; ++i) {
        const double x = lat.domain.min.x + i * h.x;
        int ahead = 0;
        bool touching = false;
        for (const auto& cr : crossings) {
          if (std::abs(cr.x - x) <= 1e-12 * (1.0 + std::abs(x))) touching = true;
          if (cr.x > x) ahead += cr.sign;
        }
        inside[lat.index(i, j, k)] = touching ? winding_number(mesh, lat.node(i, j, k)) >= 0.5 : ahead > 0;
      }
    }
  }
  return inside;
}

std::vector<std::uint8_t> surface_cells(const TriMesh& mesh, const Lattice& lat) {
  const int cx = lat.res[0] - 1;
  const int cy = lat.res[1] - 1;
  const int cz = lat.res[2] - 1;
  std::vector<std::uint8_t> cut(std::size_t(cx) * cy * cz, 0);
  const Vec3 h = lat.spacing();
  // Faces lying on a cell plane must cut the cells on both sides, whatever the round-off.
  const double pad = 1e-9 * lat.cell_diagonal();
  for (const auto& f : mesh.faces) {
    const Point3& a = mesh.vertices[f[0]];
    const Point3& b = mesh.vertices[f[1]];
    const Point3& c = mesh.vertices[f[2]];
    const Point3 lo = cwise_min(a, cwise_min(b, c));
    const Point3 hi = cwise_max(a, cwise_max(b, c));
    int r0[3];
    int r1[3];
    const int ncell[3] = {cx, cy, cz};
    bool outside = false;
    for (int ax = 0; ax < 3; ++ax) {
      r0[ax] = static_cast<int>(std::floor((lo[ax] - lat.domain.min[ax]) / h[ax])) - 1;
      r1[ax] = static_cast<int>(std::floor((hi[ax] - lat.domain.min[ax]) / h[ax])) + 1;
      r0[ax] = std::max(r0[ax], 0);
      r1[ax] = std::min(r1[ax], ncell[ax] - 1);
      if (r0[ax] > r1[ax]) outside = true;
    }
    if (outside) continue;
    for (int k = r0[2]; k <= r1[2]; ++k) {
      for (int j = r0[1]; j <= r1[1]; ++j) {
        for (int i = r0[0]; i <= r1[0]; ++i) {
          const std::size_t ci = cell_index(lat, i, j, k);
          if (cut[ci]) continue;
          const Aabb box = Aabb(lat.node(i, j, k), lat.node(i + 1, j + 1, k + 1)).expanded({pad, pad, pad});
          if (triangle_box_overlap(a, b, c, box)) cut[ci] = 1;
        }
      }
    }
  }
  return cut;
}

}  // namespace cagewarp
