// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "cagewarp/parallel.hpp"
#include "cagewarp/voxelize.hpp"
#include "cagewarp/warp.hpp"

namespace cagewarp {

Membership::Membership(const Cage& cage, int n) : cage_(&cage), lattice_(coord_lattice(cage.bounds(), n)) {
  const auto cut = surface_cells(cage.mesh(), lattice_);
  const auto inside = inside_nodes(cage.mesh(), lattice_);
  cell_state_.assign(cut.size(), 2);
  for (int k = 0; k + 1 < lattice_.res[2]; ++k) {
    for (int j = 0; j + 1 < lattice_.res[1]; ++j) {
      for (int i = 0; i + 1 < lattice_.res[0]; ++i) {
        const std::size_t c = cell_index(lattice_, i, j, k);
        if (cut[c]) continue;
        int count = 0;
        for (const auto node : lattice_.stencil({i, j, k})) count += inside[node];
        // A cell no triangle touches lies entirely on one side of the surface.
        if (count == 0) cell_state_[c] = 0;
        if (count == 8) cell_state_[c] = 1;
      }
    }
  }
}

bool Membership::contains(const Point3& p) const {
  std::array<int, 3> cell;
  Vec3 frac;
  if (!lattice_.locate(p, cell, frac)) return false;
  const auto state = cell_state_[cell_index(lattice_, cell[0], cell[1], cell[2])];
  if (state != 2) return state == 1;
  return cage_->contains(p);
}

void DeformConfig::validate() const {
  if (precise && kind == CoordinateKind::HC) {
    throw InvalidArgument("harmonic coordinates have no closed form; precise mode is not available for hc");
  }
  if (!precise && n < 16) throw InvalidArgument("grid resolution must be at least 16");
  if (!(delta_t >= 0.0) || !std::isfinite(delta_t)) throw InvalidArgument("delta_t must be a non-negative number");
}

Deformer::Deformer(std::shared_ptr<const CagePair> pair, const DeformConfig& config, std::shared_ptr<const CoordGrid> grid)
    : pair_(std::move(pair)),
      config_(config),
      grid_(std::move(grid)),
      targets_((config.validate(), ReconstructionTargets::from_pair(*pair_, config.kind))),
      deformed_member_(pair_->deformed, std::max(config.n, 16)),
      canonical_member_(pair_->canonical, std::max(config.n, 16)) {
  if (config_.precise != (grid_ == nullptr)) {
    throw InvalidArgument(config_.precise ? "precise mode takes no coordinate grid" : "grid mode needs a coordinate grid");
  }
  if (grid_) {
    if (grid_->kind != config_.kind) throw InvalidArgument("coordinate grid kind does not match the configuration");
    if (grid_->num_vertices != pair_->deformed.num_vertices() ||
        (config_.kind == CoordinateKind::GC && grid_->num_faces != pair_->deformed.num_faces())) {
      throw InvalidArgument("coordinate grid does not match the cage");
    }
    if (grid_->lattice.res[0] != config_.n) throw InvalidArgument("coordinate grid resolution does not match n");
    const Lattice expect = coord_lattice(pair_->deformed.bounds(), config_.n);
    const Vec3 tol = 1e-9 * Vec3{1, 1, 1} * (1.0 + expect.domain.diagonal());
    for (int a = 0; a < 3; ++a) {
      if (std::abs(expect.domain.min[a] - grid_->lattice.domain.min[a]) > tol[a] ||
          std::abs(expect.domain.max[a] - grid_->lattice.domain.max[a]) > tol[a]) {
        throw InvalidArgument("coordinate grid was computed for a different deformed cage");
      }
    }
    // Reconstruction is linear in the weights, so interpolating reconstructed node
    // positions equals reconstructing interpolated weights.
    const std::size_t rows = grid_->valid_count();
    node_positions_.resize(rows);
    const std::size_t nv = grid_->num_vertices;
    const std::size_t nf = grid_->num_faces;
    parallel_for(rows, 4096, default_worker_count(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        const float* w = grid_->weights.data() + r * grid_->row_size();
        Point3 p;
        for (std::size_t j = 0; j < nv; ++j) p += double(w[j]) * targets_.vertices[j];
        for (std::size_t k = 0; k < nf; ++k) p += double(w[nv + k]) * targets_.scaled_normals[k];
        node_positions_[r] = p;
      }
    });
  }
  delta_t_ = config_.delta_t > 0.0 ? config_.delta_t : 5e-3 * pair_->deformed.diagonal();
}

Region Deformer::classify(const Point3& x) const {
  if (in_deformed(x)) return Region::Mapped;
  if (in_canonical(x)) return Region::Cleared;
  return Region::Unchanged;
}

Point3 Deformer::map_precise(const Point3& x) const {
  precise_evaluations_.fetch_add(1, std::memory_order_relaxed);
  const Cage& cage = pair_->deformed;
  const auto eval = [&](const Point3& p, Point3& out) {
    return config_.kind == CoordinateKind::MVC ? detail::mvc_map(cage, targets_, p, out)
                                               : detail::gc_map(cage, targets_, p, out);
  };
  Point3 out;
  if (eval(x, out)) return out;
  if (eval(cage.project_inside(x, surface_epsilon(cage)), out)) return out;
  throw GeometryError("cage coordinates failed near the cage surface");
}

Point3 Deformer::map_boundary(const Point3& x) const {
  const auto& lat = grid_->lattice;
  std::array<int, 3> cell;
  Vec3 frac;
  if (lat.locate(x, cell, frac)) {
    const auto idx = lat.stencil(cell);
    const auto w = trilinear_weights(frac);
    int best = -1;
    for (int s = 0; s < 8; ++s) {
      if (grid_->valid(idx[s]) && (best < 0 || w[s] > w[best])) best = s;
    }
    if (best >= 0) return node_positions_[std::size_t(grid_->slot[idx[best]])];
  }
  const auto hat = pair_->deformed.surface_value(x);
  Point3 p;
  for (int i = 0; i < hat.count; ++i) p += hat.weight[i] * targets_.vertices[hat.vertex[i]];
  return p;
}

Point3 Deformer::map_unchecked(const Point3& x) const {
  if (config_.precise) return map_precise(x);
  const auto& lat = grid_->lattice;
  std::array<int, 3> cell;
  Vec3 frac;
  if (lat.locate(x, cell, frac)) {
    const auto idx = lat.stencil(cell);
    const auto w = trilinear_weights(frac);
    Point3 p;
    bool complete = true;
    for (int s = 0; s < 8 && complete; ++s) {
      const auto slot = grid_->slot[idx[s]];
      if (slot < 0) {
        complete = false;
      } else {
        p += w[s] * node_positions_[std::size_t(slot)];
      }
    }
    if (complete) return p;
  }
  fallbacks_.fetch_add(1, std::memory_order_relaxed);
  return has_closed_form(config_.kind) ? map_precise(x) : map_boundary(x);
}

Point3 Deformer::phi_x(const Point3& x) const {
  if (!in_deformed(x)) throw GeometryError("point outside the deformed cage");
  return map_unchecked(x);
}

Point3 Deformer::phi_x_reference(const Point3& x) const {
  if (!in_deformed(x)) throw GeometryError("point outside the deformed cage");
  if (config_.precise) return map_precise(x);
  const auto w = sample_weights(*grid_, x);
  if (!w) return map_unchecked(x);
  return targets_.apply(w->vertex_weights, w->face_weights);
}

Point3 Deformer::phi_x_precise(const Point3& x) const {
  if (!has_closed_form(config_.kind)) {
    throw InvalidArgument("harmonic coordinates have no closed form; precise mode is not available for hc");
  }
  if (!in_deformed(x)) throw GeometryError("point outside the deformed cage");
  return map_precise(x);
}

UnitDir3 Deformer::direction(const Point3& x, const Point3& mapped, const UnitDir3& d) const {
  const Point3 forward = x + delta_t_ * d.vec();
  Vec3 diff;
  if (in_deformed(forward)) {
    diff = map_unchecked(forward) - mapped;
  } else {
    const Point3 backward = x - delta_t_ * d.vec();
    if (!in_deformed(backward)) return d;
    diff = mapped - map_unchecked(backward);
  }
  diff /= delta_t_;
  if (!(norm(diff) >= 1e-12) || !is_finite(diff)) {
    degenerate_directions_.fetch_add(1, std::memory_order_relaxed);
    return d;
  }
  return UnitDir3::normalize(diff);
}

UnitDir3 Deformer::phi_d(const Point3& x, const UnitDir3& d) const { return direction(x, phi_x(x), d); }

RadianceSample Deformer::query(const VoxelRadianceField& field, const Point3& x, const UnitDir3& d,
                               bool skip_empty) const {
  switch (classify(x)) {
    case Region::Cleared:
      return {};
    case Region::Unchanged:
      if (skip_empty && field.sample_density(x) == 0.0) return {};
      return field.sample(x, d);
    case Region::Mapped:
      break;
  }
  const Point3 mapped = map_unchecked(x);
  if (skip_empty && field.sample_density(mapped) == 0.0) return {};
  return field.sample(mapped, direction(x, mapped, d));
}

DeformCounters Deformer::counters() const {
  return {fallbacks_.load(), precise_evaluations_.load(), degenerate_directions_.load()};
}

void Deformer::reset_counters() const {
  fallbacks_ = 0;
  precise_evaluations_ = 0;
  degenerate_directions_ = 0;
}

}  // namespace cagewarp
