// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cagewarp/lattice.hpp"
#include "cagewarp/vec.hpp"

namespace cagewarp {

// Spherical harmonics -----------------------------------------------------------------------

inline constexpr double kShC0 = 0.28209479177387814;  // 1 / (2 sqrt(pi))
inline constexpr double kShC1 = 0.4886025119029199;   // sqrt(3 / (4 pi))

constexpr int sh_coefficient_count(int degree) { return (degree + 1) * (degree + 1); }

/// Real spherical harmonics up to degree 2 in (l, m) order:
/// Y00; Y1-1 = -C1 y, Y10 = C1 z, Y11 = -C1 x; then the five degree-2 terms.
void eval_sh_basis(const UnitDir3& d, int degree, std::span<double> out);
std::vector<double> eval_sh_basis(const UnitDir3& d, int degree);

// Voxel radiance field ----------------------------------------------------------------------

struct RadianceSample {
  Vec3 rgb;
  double sigma = 0.0;
};

/// Density and per-channel SH color coefficients on a node lattice, sampled
/// trilinearly. Color is clamp(SH . coeffs, 0, 1); everything outside the domain is
/// empty.
class VoxelRadianceField {
 public:
  VoxelRadianceField() = default;
  VoxelRadianceField(const Lattice& lattice, int sh_degree);

  const Lattice& lattice() const { return lattice_; }
  const Aabb& domain() const { return lattice_.domain; }
  int sh_degree() const { return sh_degree_; }
  int coeffs_per_channel() const { return sh_coefficient_count(sh_degree_); }

  std::vector<float>& density() { return density_; }
  const std::vector<float>& density() const { return density_; }
  /// Grouped by node, channel-major within a node: [node][channel][coefficient].
  std::vector<float>& sh_coeffs() { return sh_; }
  const std::vector<float>& sh_coeffs() const { return sh_; }

  float* node_coeffs(std::size_t node, int channel) {
    return sh_.data() + (node * 3 + channel) * coeffs_per_channel();
  }

  RadianceSample sample(const Point3& x, const UnitDir3& d) const;
  double sample_density(const Point3& x) const;

  /// Throws InvalidArgument on negative density or inconsistent array sizes.
  void validate() const;

  /// Node densities as a scalar grid (for surface extraction and cage generation).
  ScalarGrid density_grid() const;

  friend bool operator==(const VoxelRadianceField&, const VoxelRadianceField&) = default;

 private:
  Lattice lattice_;
  int sh_degree_ = 0;
  std::vector<float> density_;
  std::vector<float> sh_;
};

/// "VRF1" binary layout, little-endian: magic, u32 nx ny nz, f64 x6 domain (min, max),
/// u32 sh_degree, f32 density per node (x fastest), f32 coefficients grouped by node.
std::string encode_field(const VoxelRadianceField& field);
VoxelRadianceField decode_field(std::string_view bytes);
void save_field(const VoxelRadianceField& field, const std::filesystem::path& path);
VoxelRadianceField load_field(const std::filesystem::path& path);

}  // namespace cagewarp
