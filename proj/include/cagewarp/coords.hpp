// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cagewarp/mesh.hpp"

namespace cagewarp {

enum class CoordinateKind { MVC, HC, GC };

std::string_view to_string(CoordinateKind kind);
/// Accepts "mvc", "hc", "gc" (case-insensitive).
CoordinateKind parse_coordinate_kind(std::string_view text);

/// Harmonic coordinates only exist as a grid solve.
constexpr bool has_closed_form(CoordinateKind kind) { return kind != CoordinateKind::HC; }

/// Cage coordinates of one point: one weight per cage vertex, plus one per face for
/// green coordinates (empty otherwise). Mean value weights may be negative inside
/// non-convex cages.
struct CageWeights {
  std::vector<double> vertex_weights;
  std::vector<double> face_weights;
};

/// Closed-form evaluation is refused within this distance of the cage surface.
inline double surface_epsilon(const Cage& cage) { return 1e-6 * cage.diagonal(); }

/// Mean value coordinates of a strictly interior point.
/// Throws GeometryError("point too close to cage surface") on or outside the cage.
CageWeights mvc_weights(const Cage& cage, const Point3& x);

/// Green coordinates (vertex weights and face weights) of a strictly interior point.
CageWeights green_weights(const Cage& cage, const Point3& x);

/// Per-face stretch factor between the source (deformed) and target (canonical)
/// cages; 1 for every face when the cages coincide.
std::vector<double> gc_stretch_factors(const Cage& source, const Cage& target);

/// Reconstruct a position from weights computed against pair.deformed, using the
/// geometry of pair.canonical.
Point3 apply_weights(const CageWeights& weights, const CagePair& pair, CoordinateKind kind);

/// Reconstruction against the source cage itself (identity reproduction check).
Point3 reconstruct(const CageWeights& weights, const Cage& cage, CoordinateKind kind);

/// Reconstruction targets for a pair: canonical vertices, and for green coordinates the
/// stretched canonical unit normals. mapped = sum w_j * vertices_j + sum psi_k * normals_k.
struct ReconstructionTargets {
  std::vector<Point3> vertices;
  std::vector<Vec3> scaled_normals;

  static ReconstructionTargets from_pair(const CagePair& pair, CoordinateKind kind);
  Point3 apply(std::span<const double> vertex_weights, std::span<const double> face_weights) const;
};

namespace detail {

/// Unchecked kernels writing into caller buffers (sized V, and F for green). Mean value
/// weights of points numerically on the surface are the surface hat basis; green
/// coordinates return false on cage edges and vertices.
bool mvc_kernel(const Cage& cage, const Point3& x, std::span<double> vertex_weights);
bool gc_kernel(const Cage& cage, const Point3& x, std::span<double> vertex_weights, std::span<double> face_weights);

/// Fused evaluate-and-reconstruct without materializing weights.
bool mvc_map(const Cage& cage, const ReconstructionTargets& targets, const Point3& x, Point3& out);
bool gc_map(const Cage& cage, const ReconstructionTargets& targets, const Point3& x, Point3& out);

}  // namespace detail

}  // namespace cagewarp
