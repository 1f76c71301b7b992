// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cagewarp/coords.hpp"
#include "cagewarp/field.hpp"
#include "cagewarp/harmonic.hpp"
#include "cagewarp/lattice.hpp"

namespace cagewarp {

// Coordinate grid ---------------------------------------------------------------------------

/// n^3 lattice over the cage bounds plus a two-cell margin on every side.
Lattice coord_lattice(const Aabb& cage_bounds, int n);

/// Cage weights precomputed on a lattice. Only valid nodes carry weights; `slot` maps a
/// node to its row in `weights` (-1 for invalid nodes). A row holds V vertex weights
/// followed by F face weights for green coordinates.
struct CoordGrid {
  CoordinateKind kind = CoordinateKind::MVC;
  Lattice lattice;
  std::size_t num_vertices = 0;
  std::size_t num_faces = 0;  // non-zero for green coordinates only
  std::vector<std::int32_t> slot;
  std::vector<float> weights;
  /// Closed-form weight evaluations (MVC/GC) or solved nodes (HC) spent building the grid.
  std::size_t evaluations = 0;

  std::size_t row_size() const { return num_vertices + num_faces; }
  std::size_t valid_count() const { return weights.size() / std::max<std::size_t>(row_size(), 1); }
  bool valid(std::size_t node) const { return slot[node] >= 0; }
  const float* row(std::size_t node) const { return weights.data() + std::size_t(slot[node]) * row_size(); }
};

struct PrecomputeOptions {
  HarmonicParams harmonic;
  unsigned workers = 0;  // 0 = default_worker_count()
};

/// Weights for every valid node. MVC/GC: nodes inside the cage dilated by two nodes, each
/// evaluated in closed form (exterior MVC nodes at the node itself, exterior GC nodes and
/// nodes within the surface exclusion zone at their closest interior point). HC: boundary
/// and interior nodes of the harmonic solve on the same lattice. Requires n >= 16.
CoordGrid precompute_coord_grid(const Cage& deformed, CoordinateKind kind, int n, const PrecomputeOptions& options = {});

/// Componentwise trilinear interpolation; nullopt when x leaves the lattice or the
/// stencil touches an invalid node.
std::optional<CageWeights> sample_weights(const CoordGrid& grid, const Point3& x);

/// "CWG1" cache file: magic, u32 n, f64 x6 domain, u32 kind, u32 V, u32 F, then per node
/// u8 valid followed (valid nodes only) by f32 weights.
std::string encode_coord_grid(const CoordGrid& grid);
CoordGrid decode_coord_grid(std::string_view bytes);
void save_coord_grid(const CoordGrid& grid, const std::filesystem::path& path);
CoordGrid load_coord_grid(const std::filesystem::path& path);

/// Content hash (hex) of the deformed cage, kind and resolution.
std::string coord_cache_key(const Cage& deformed, CoordinateKind kind, int n);

// Membership --------------------------------------------------------------------------------

/// Exact inside test accelerated by a cell classification: cells away from the surface
/// answer from the lattice, cells touched by the surface fall back to the winding number.
class Membership {
 public:
  Membership(const Cage& cage, int n);

  bool contains(const Point3& p) const;
  const Lattice& lattice() const { return lattice_; }

 private:
  const Cage* cage_;
  Lattice lattice_;
  std::vector<std::uint8_t> cell_state_;  // 0 outside, 1 inside, 2 exact test needed
};

// Deformation -------------------------------------------------------------------------------

struct DeformConfig {
  CoordinateKind kind = CoordinateKind::MVC;
  int n = 128;
  bool precise = false;
  /// Finite-difference step for the direction map; 0 picks 5e-3 x deformed cage diagonal.
  double delta_t = 0.0;

  /// Throws InvalidArgument for precise harmonic coordinates or out-of-range values.
  void validate() const;
};

/// Which of the three deformed-field cases a point falls into.
enum class Region : std::uint8_t {
  Unchanged,  // outside both cages: the canonical field as is
  Cleared,    // inside the canonical cage only: emptied
  Mapped,     // inside the deformed cage: pulled back from canonical space
};

struct DeformCounters {
  std::uint64_t fallbacks = 0;          // grid samples without a complete stencil
  std::uint64_t precise_evaluations = 0;  // closed-form evaluations during rendering
  std::uint64_t degenerate_directions = 0;
};

/// Deformed radiance field over a canonical one. Holds the pair, membership
/// accelerators and (in grid mode) the coordinate grid with the canonical position of
/// every valid node. Thread-safe for concurrent queries.
class Deformer {
 public:
  /// `grid` must be null exactly in precise mode and match the pair, kind and n.
  Deformer(std::shared_ptr<const CagePair> pair, const DeformConfig& config, std::shared_ptr<const CoordGrid> grid);

  const DeformConfig& config() const { return config_; }
  const CagePair& pair() const { return *pair_; }
  const CoordGrid* grid() const { return grid_.get(); }
  double delta_t() const { return delta_t_; }

  Region classify(const Point3& x) const;
  bool in_deformed(const Point3& x) const { return deformed_member_.contains(x); }
  bool in_canonical(const Point3& x) const { return canonical_member_.contains(x); }

  /// Deformed-to-canonical position map. Throws GeometryError outside the deformed cage.
  Point3 phi_x(const Point3& x) const;
  /// Same map through interpolated weights and a full reconstruction (reference for the
  /// precomputed-position path used by phi_x).
  Point3 phi_x_reference(const Point3& x) const;
  /// Closed-form map regardless of mode (MVC/GC only).
  Point3 phi_x_precise(const Point3& x) const;

  /// Normalized finite difference of phi_x along d (forward, else backward, else d).
  UnitDir3 phi_d(const Point3& x, const UnitDir3& d) const;

  /// The deformed field at (x, d). With `skip_empty`, color is left at zero wherever the
  /// density is zero (render shortcut; the density is unaffected).
  RadianceSample query(const VoxelRadianceField& field, const Point3& x, const UnitDir3& d,
                       bool skip_empty = false) const;

  DeformCounters counters() const;
  void reset_counters() const;

 private:
  Point3 map_unchecked(const Point3& x) const;
  Point3 map_precise(const Point3& x) const;
  Point3 map_boundary(const Point3& x) const;
  UnitDir3 direction(const Point3& x, const Point3& mapped, const UnitDir3& d) const;

  std::shared_ptr<const CagePair> pair_;
  DeformConfig config_;
  std::shared_ptr<const CoordGrid> grid_;
  ReconstructionTargets targets_;
  std::vector<Vec3> node_positions_;  // canonical position per valid grid row
  Membership deformed_member_;
  Membership canonical_member_;
  double delta_t_ = 0.0;

  mutable std::atomic<std::uint64_t> fallbacks_{0};
  mutable std::atomic<std::uint64_t> precise_evaluations_{0};
  mutable std::atomic<std::uint64_t> degenerate_directions_{0};
};

/// Free-function form of Deformer::query.
inline RadianceSample deformed_query(const VoxelRadianceField& field, const Deformer& deformer, const Point3& x,
                                     const UnitDir3& d) {
  return deformer.query(field, x, d);
}

}  // namespace cagewarp
