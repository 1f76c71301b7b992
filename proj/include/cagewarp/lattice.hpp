// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cagewarp/vec.hpp"

namespace cagewarp {

/// Regular node lattice spanning an Aabb: node (i, j, k) sits at
/// domain.min + (i, j, k) * spacing, with the last node on domain.max.
/// Linear node index is x-fastest.
struct Lattice {
  std::array<int, 3> res{0, 0, 0};
  Aabb domain;

  Lattice() = default;
  Lattice(std::array<int, 3> r, const Aabb& d) : res(r), domain(d) {
    if (r[0] < 2 || r[1] < 2 || r[2] < 2) throw InvalidArgument("lattice needs at least 2 nodes per axis");
  }

  std::size_t count() const { return std::size_t(res[0]) * res[1] * res[2]; }
  Vec3 spacing() const {
    const Vec3 e = domain.extent();
    return {e.x / (res[0] - 1), e.y / (res[1] - 1), e.z / (res[2] - 1)};
  }
  double cell_diagonal() const { return norm(spacing()); }

  std::size_t index(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(res[0]) * (std::size_t(j) + std::size_t(res[1]) * std::size_t(k));
  }
  std::array<int, 3> coords(std::size_t idx) const {
    const int i = static_cast<int>(idx % res[0]);
    idx /= res[0];
    return {i, static_cast<int>(idx % res[1]), static_cast<int>(idx / res[1])};
  }
  Point3 node(int i, int j, int k) const {
    const Vec3 h = spacing();
    return {domain.min.x + i * h.x, domain.min.y + j * h.y, domain.min.z + k * h.z};
  }
  Point3 node(std::size_t idx) const {
    const auto c = coords(idx);
    return node(c[0], c[1], c[2]);
  }

  /// Cell containing p (clamped to the last cell on the max faces) and the
  /// fractional position inside it. False when p lies outside the domain.
  bool locate(const Point3& p, std::array<int, 3>& cell, Vec3& frac) const {
    if (!domain.contains(p)) return false;
    const Vec3 h = spacing();
    for (int a = 0; a < 3; ++a) {
      const double u = (p[a] - domain.min[a]) / h[a];
      int c = static_cast<int>(std::floor(u));
      c = std::clamp(c, 0, res[a] - 2);
      cell[a] = c;
      frac[a] = std::clamp(u - c, 0.0, 1.0);
    }
    return true;
  }

  /// Linear indices of the 8 stencil nodes of `cell`, in (dx, dy, dz) bit order.
  std::array<std::size_t, 8> stencil(const std::array<int, 3>& cell) const {
    const std::size_t base = index(cell[0], cell[1], cell[2]);
    const std::size_t sx = 1;
    const std::size_t sy = std::size_t(res[0]);
    const std::size_t sz = std::size_t(res[0]) * res[1];
    return {base, base + sx, base + sy, base + sx + sy, base + sz, base + sx + sz, base + sy + sz, base + sx + sy + sz};
  }

  friend bool operator==(const Lattice&, const Lattice&) = default;
};

/// Trilinear weights of the 8 stencil nodes, matching Lattice::stencil order.
inline std::array<double, 8> trilinear_weights(const Vec3& f) {
  const double gx = 1.0 - f.x;
  const double gy = 1.0 - f.y;
  const double gz = 1.0 - f.z;
  return {gx * gy * gz, f.x * gy * gz, gx * f.y * gz, f.x * f.y * gz,
          gx * gy * f.z, f.x * gy * f.z, gx * f.y * f.z, f.x * f.y * f.z};
}

/// Dense scalar samples on a lattice.
struct ScalarGrid {
  Lattice lattice;
  std::vector<double> values;

  ScalarGrid() = default;
  explicit ScalarGrid(const Lattice& l, double fill = 0.0) : lattice(l), values(l.count(), fill) {}

  double& at(int i, int j, int k) { return values[lattice.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[lattice.index(i, j, k)]; }
};

}  // namespace cagewarp
