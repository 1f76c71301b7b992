// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/field.hpp"

#include <algorithm>
#include <cmath>

#include "cagewarp/io_util.hpp"

namespace cagewarp {

VoxelRadianceField::VoxelRadianceField(const Lattice& lattice, int sh_degree) : lattice_(lattice), sh_degree_(sh_degree) {
  if (sh_degree < 0 || sh_degree > 2) throw InvalidArgument("sh_degree must be 0, 1 or 2");
  density_.assign(lattice.count(), 0.0f);
  sh_.assign(lattice.count() * 3 * coeffs_per_channel(), 0.0f);
}

double VoxelRadianceField::sample_density(const Point3& x) const {
  std::array<int, 3> cell;
  Vec3 frac;
  if (!lattice_.locate(x, cell, frac)) return 0.0;
  const auto idx = lattice_.stencil(cell);
  const auto w = trilinear_weights(frac);
  double sigma = 0.0;
  for (int s = 0; s < 8; ++s) sigma += w[s] * density_[idx[s]];
  return std::max(sigma, 0.0);
}

RadianceSample VoxelRadianceField::sample(const Point3& x, const UnitDir3& d) const {
  std::array<int, 3> cell;
  Vec3 frac;
  if (!lattice_.locate(x, cell, frac)) return {};
  const auto idx = lattice_.stencil(cell);
  const auto w = trilinear_weights(frac);
  const int k = coeffs_per_channel();
  double basis[9];
  eval_sh_basis(d, sh_degree_, std::span<double>(basis, 9));

  RadianceSample out;
  double rgb[3] = {0.0, 0.0, 0.0};
  for (int s = 0; s < 8; ++s) {
    if (w[s] == 0.0) continue;
    out.sigma += w[s] * density_[idx[s]];
    const float* c = sh_.data() + idx[s] * 3 * k;
    for (int ch = 0; ch < 3; ++ch) {
      double v = 0.0;
      for (int i = 0; i < k; ++i) v += basis[i] * c[ch * k + i];
      rgb[ch] += w[s] * v;
    }
  }
  out.sigma = std::max(out.sigma, 0.0);
  out.rgb = {std::clamp(rgb[0], 0.0, 1.0), std::clamp(rgb[1], 0.0, 1.0), std::clamp(rgb[2], 0.0, 1.0)};
  return out;
}

void VoxelRadianceField::validate() const {
  if (density_.size() != lattice_.count()) throw InvalidArgument("density array does not match the lattice");
  if (sh_.size() != lattice_.count() * 3 * coeffs_per_channel()) {
    throw InvalidArgument("coefficient array does not match the lattice and sh_degree");
  }
  for (const float s : density_) {
    if (!(s >= 0.0f) || !std::isfinite(s)) throw InvalidArgument("density must be finite and non-negative");
  }
  for (const float c : sh_) {
    if (!std::isfinite(c)) throw InvalidArgument("non-finite color coefficient");
  }
}

ScalarGrid VoxelRadianceField::density_grid() const {
  ScalarGrid g(lattice_);
  std::copy(density_.begin(), density_.end(), g.values.begin());
  return g;
}

namespace {
constexpr std::string_view kMagic = "VRF1";
}

std::string encode_field(const VoxelRadianceField& field) {
  field.validate();
  ByteWriter w;
  w.reserve(68 + 4 * (field.density().size() + field.sh_coeffs().size()));
  w.put_bytes(kMagic);
  for (int a = 0; a < 3; ++a) w.put<std::uint32_t>(static_cast<std::uint32_t>(field.lattice().res[a]));
  const Aabb& d = field.domain();
  for (const double v : {d.min.x, d.min.y, d.min.z, d.max.x, d.max.y, d.max.z}) w.put<double>(v);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(field.sh_degree()));
  for (const float v : field.density()) w.put<float>(v);
  for (const float v : field.sh_coeffs()) w.put<float>(v);
  return w.bytes();
}

VoxelRadianceField decode_field(std::string_view bytes) {
  ByteReader r(bytes);
  const auto magic = r.get_bytes(4);
  if (magic != kMagic) {
    if (magic.substr(0, 3) == "VRF") throw ParseError("unsupported version");
    throw ParseError("bad magic");
  }
  std::array<int, 3> res;
  for (auto& n : res) {
    const auto v = r.get<std::uint32_t>();
    if (v < 2 || v > 4096) throw ParseError("invalid lattice resolution " + std::to_string(v));
    n = static_cast<int>(v);
  }
  double dom[6];
  for (auto& v : dom) v = r.get<double>();
  for (const double v : dom) {
    if (!std::isfinite(v)) throw ParseError("non-finite domain bound");
  }
  if (!(dom[0] < dom[3] && dom[1] < dom[4] && dom[2] < dom[5])) throw ParseError("empty field domain");
  const auto degree = r.get<std::uint32_t>();
  if (degree > 2) throw ParseError("invalid sh_degree " + std::to_string(degree));
  VoxelRadianceField field(Lattice(res, Aabb({dom[0], dom[1], dom[2]}, {dom[3], dom[4], dom[5]})),
                           static_cast<int>(degree));
  const std::size_t needed = 4 * (field.density().size() + field.sh_coeffs().size());
  if (r.remaining() < needed) throw ParseError("truncated file");
  if (r.remaining() > needed) throw ParseError("trailing data after field payload");
  for (auto& v : field.density()) v = r.get<float>();
  for (auto& v : field.sh_coeffs()) v = r.get<float>();
  try {
    field.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return field;
}

void save_field(const VoxelRadianceField& field, const std::filesystem::path& path) {
  write_file_atomic(path, encode_field(field));
}

VoxelRadianceField load_field(const std::filesystem::path& path) {
  const std::string bytes = read_binary_file(path);
  try {
    return decode_field(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace cagewarp
