// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdio>

#include "cagewarp/io_util.hpp"
#include "cagewarp/parallel.hpp"
#include "cagewarp/voxelize.hpp"
#include "cagewarp/warp.hpp"

namespace cagewarp {

Lattice coord_lattice(const Aabb& cage_bounds, int n) {
  if (n < 16) throw InvalidArgument("grid resolution must be at least 16");
  const Vec3 e = cage_bounds.extent();
  const double cells = n - 5;  // n - 1 cells, four of them margin
  const Vec3 h{e.x / cells, e.y / cells, e.z / cells};
  return Lattice({n, n, n}, cage_bounds.expanded(2.0 * h));
}

namespace {

// Chebyshev dilation of a node mask by `r` nodes, one axis at a time.
std::vector<std::uint8_t> dilate(const Lattice& lat, std::vector<std::uint8_t> mask, int r) {
  std::vector<std::uint8_t> tmp(mask.size());
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? std::size_t(lat.res[0]) : std::size_t(lat.res[0]) * lat.res[1]);
    const int len = lat.res[axis];
    for (std::size_t n = 0; n < mask.size(); ++n) {
      const int c = lat.coords(n)[axis];
      std::uint8_t v = 0;
      for (int o = std::max(0, c - r); o <= std::min(len - 1, c + r) && !v; ++o) {
        v = mask[n + (std::ptrdiff_t(o) - c) * std::ptrdiff_t(stride)];
      }
      tmp[n] = v;
    }
    mask.swap(tmp);
  }
  return mask;
}

CoordGrid harmonic_grid(const Cage& cage, const Lattice& lat, const HarmonicParams& params) {
  const HarmonicSolution sol = hc_grid_solve(cage, lat, params);
  CoordGrid g;
  g.kind = CoordinateKind::HC;
  g.lattice = lat;
  g.num_vertices = sol.num_vertices;
  g.slot.assign(lat.count(), -1);
  std::int32_t next = 0;
  for (std::size_t n = 0; n < lat.count(); ++n) {
    if (sol.node_class[n] != NodeClass::Exterior) g.slot[n] = next++;
  }
  g.weights.resize(std::size_t(next) * g.num_vertices);
  for (std::size_t n = 0; n < lat.count(); ++n) {
    if (g.slot[n] < 0) continue;
    const auto w = sol.node_weights(n);
    std::copy(w.begin(), w.end(), g.weights.begin() + std::size_t(g.slot[n]) * g.num_vertices);
  }
  g.evaluations = std::size_t(next);
  return g;
}

}  // namespace

CoordGrid precompute_coord_grid(const Cage& cage, CoordinateKind kind, int n, const PrecomputeOptions& options) {
  const Lattice lat = coord_lattice(cage.bounds(), n);
  if (kind == CoordinateKind::HC) return harmonic_grid(cage, lat, options.harmonic);

  CoordGrid g;
  g.kind = kind;
  g.lattice = lat;
  g.num_vertices = cage.num_vertices();
  g.num_faces = kind == CoordinateKind::GC ? cage.num_faces() : 0;

  const auto inside = inside_nodes(cage.mesh(), lat);
  const auto valid = dilate(lat, inside, 2);
  g.slot.assign(lat.count(), -1);
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < lat.count(); ++i) {
    if (valid[i]) {
      g.slot[i] = static_cast<std::int32_t>(nodes.size());
      nodes.push_back(i);
    }
  }
  const std::size_t row = g.row_size();
  g.weights.assign(nodes.size() * row, 0.0f);
  const double eps = surface_epsilon(cage);

  const unsigned workers = options.workers ? options.workers : default_worker_count();
  parallel_for(nodes.size(), 256, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> vw(g.num_vertices), fw(g.num_faces);
    for (std::size_t s = begin; s < end; ++s) {
      const Point3 p = lat.node(nodes[s]);
      bool ok = false;
      if (kind == CoordinateKind::MVC) {
        // Mean value coordinates stay linear-precise outside the cage; only the
        // surface itself is singular.
        ok = cage.closest(p).distance >= eps && detail::mvc_kernel(cage, p, vw);
        if (!ok) ok = detail::mvc_kernel(cage, cage.project_inside(p, eps), vw);
      } else {
        const Point3 q = inside[nodes[s]] && cage.closest(p).distance >= eps ? p : cage.project_inside(p, eps);
        ok = detail::gc_kernel(cage, q, vw, fw);
      }
      if (!ok) throw GeometryError("cage coordinates failed at grid node " + std::to_string(nodes[s]));
      float* out = g.weights.data() + s * row;
      for (std::size_t j = 0; j < g.num_vertices; ++j) out[j] = static_cast<float>(vw[j]);
      for (std::size_t k = 0; k < g.num_faces; ++k) out[g.num_vertices + k] = static_cast<float>(fw[k]);
    }
  });
  g.evaluations = nodes.size();
  return g;
}

std::optional<CageWeights> sample_weights(const CoordGrid& grid, const Point3& x) {
  std::array<int, 3> cell;
  Vec3 frac;
  if (!grid.lattice.locate(x, cell, frac)) return std::nullopt;
  const auto idx = grid.lattice.stencil(cell);
  for (const auto n : idx) {
    if (!grid.valid(n)) return std::nullopt;
  }
  const auto w = trilinear_weights(frac);
  CageWeights out;
  out.vertex_weights.assign(grid.num_vertices, 0.0);
  out.face_weights.assign(grid.num_faces, 0.0);
  for (int s = 0; s < 8; ++s) {
    const float* r = grid.row(idx[s]);
    for (std::size_t j = 0; j < grid.num_vertices; ++j) out.vertex_weights[j] += w[s] * r[j];
    for (std::size_t k = 0; k < grid.num_faces; ++k) out.face_weights[k] += w[s] * r[grid.num_vertices + k];
  }
  return out;
}

namespace {
constexpr std::string_view kGridMagic = "CWG1";
}

std::string encode_coord_grid(const CoordGrid& g) {
  const auto& lat = g.lattice;
  if (lat.res[0] != lat.res[1] || lat.res[0] != lat.res[2]) throw InvalidArgument("coordinate grids are cubic");
  ByteWriter w;
  w.reserve(52 + lat.count() + 4 * g.weights.size());
  w.put_bytes(kGridMagic);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(lat.res[0]));
  const Aabb& d = lat.domain;
  for (const double v : {d.min.x, d.min.y, d.min.z, d.max.x, d.max.y, d.max.z}) w.put<double>(v);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.kind));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.num_vertices));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.num_faces));
  const std::size_t row = g.row_size();
  for (std::size_t n = 0; n < lat.count(); ++n) {
    w.put<std::uint8_t>(g.valid(n) ? 1 : 0);
    if (!g.valid(n)) continue;
    const float* r = g.row(n);
    for (std::size_t i = 0; i < row; ++i) w.put<float>(r[i]);
  }
  return w.bytes();
}

CoordGrid decode_coord_grid(std::string_view bytes) {
  ByteReader r(bytes);
  const auto magic = r.get_bytes(4);
  if (magic != kGridMagic) {
    if (magic.substr(0, 3) == "CWG") throw ParseError("unsupported version");
    throw ParseError("bad magic");
  }
  const auto n = r.get<std::uint32_t>();
  if (n < 2 || n > 2048) throw ParseError("invalid grid resolution " + std::to_string(n));
  double dom[6];
  for (auto& v : dom) v = r.get<double>();
  if (!(dom[0] < dom[3] && dom[1] < dom[4] && dom[2] < dom[5])) throw ParseError("empty grid domain");
  const auto kind = r.get<std::uint32_t>();
  if (kind > 2) throw ParseError("invalid coordinate kind " + std::to_string(kind));
  CoordGrid g;
  g.kind = static_cast<CoordinateKind>(kind);
  g.num_vertices = r.get<std::uint32_t>();
  g.num_faces = r.get<std::uint32_t>();
  if (g.num_vertices == 0 || (g.kind == CoordinateKind::GC) != (g.num_faces > 0)) {
    throw ParseError("inconsistent weight counts");
  }
  const int ni = static_cast<int>(n);
  g.lattice = Lattice({ni, ni, ni}, Aabb({dom[0], dom[1], dom[2]}, {dom[3], dom[4], dom[5]}));
  g.slot.assign(g.lattice.count(), -1);
  const std::size_t row = g.row_size();
  std::int32_t next = 0;
  for (std::size_t i = 0; i < g.lattice.count(); ++i) {
    const auto flag = r.get<std::uint8_t>();
    if (flag > 1) throw ParseError("invalid node flag");
    if (!flag) continue;
    g.slot[i] = next++;
    const auto raw = r.get_bytes(4 * row);
    ByteReader rr(raw);
    for (std::size_t k = 0; k < row; ++k) g.weights.push_back(rr.get<float>());
  }
  if (r.remaining() != 0) throw ParseError("trailing data after grid payload");
  g.evaluations = 0;
  return g;
}

void save_coord_grid(const CoordGrid& grid, const std::filesystem::path& path) {
  write_file_atomic(path, encode_coord_grid(grid));
}

CoordGrid load_coord_grid(const std::filesystem::path& path) {
  const std::string bytes = read_binary_file(path);
  try {
    return decode_coord_grid(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string coord_cache_key(const Cage& deformed, CoordinateKind kind, int n) {
  std::uint64_t h = 1469598103934665603ull;
  const auto mix = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  ByteWriter w;
  for (const auto& v : deformed.vertices()) {
    w.put<double>(v.x);
    w.put<double>(v.y);
    w.put<double>(v.z);
  }
  for (const auto& f : deformed.faces()) {
    for (const auto i : f) w.put<std::uint32_t>(i);
  }
  w.put<std::uint32_t>(static_cast<std::uint32_t>(kind));
  w.put<std::int32_t>(n);
  mix(w.bytes().data(), w.bytes().size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cagewarp
