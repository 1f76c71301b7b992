// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/coords.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace cagewarp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-12;

// Mean value coordinates over a closed triangle mesh (Ju, Schaefer, Warren 2005):
// per-triangle spherical weights accumulated into the triangle's vertices. `sink`
// receives unnormalized (vertex, weight) contributions. Returns false when x lies on
// a vertex or numerically inside a face (the kernel is singular there).
template <class Sink>
bool mvc_accumulate(const Cage& cage, const Point3& x, Sink&& sink) {
  const auto& verts = cage.vertices();
  for (const auto& [f, scale] : cage.basis_triangles()) {
    double d[3];
    Vec3 u[3];
    for (int i = 0; i < 3; ++i) {
      const Vec3 r = verts[f[i]] - x;
      d[i] = norm(r);
      if (d[i] < kEps) return false;
      u[i] = r / d[i];
    }
    double theta[3];
    for (int i = 0; i < 3; ++i) {
      const double l = norm(u[(i + 1) % 3] - u[(i + 2) % 3]);
      theta[i] = 2.0 * std::asin(std::min(1.0, 0.5 * l));
    }
    const double h = 0.5 * (theta[0] + theta[1] + theta[2]);
    if (kPi - h < 1e-10) return false;  // x inside this triangle

    const double sin_t[3] = {std::sin(theta[0]), std::sin(theta[1]), std::sin(theta[2])};
    double c[3];
    for (int i = 0; i < 3; ++i) {
      const double denom = sin_t[(i + 1) % 3] * sin_t[(i + 2) % 3];
      c[i] = denom > 0.0 ? (2.0 * std::sin(h) * std::sin(h - theta[i])) / denom - 1.0 : 1.0;
    }
    const double sign = dot(u[0], cross(u[1], u[2])) >= 0.0 ? 1.0 : -1.0;
    double s[3];
    bool coplanar = false;
    for (int i = 0; i < 3; ++i) {
      s[i] = sign * std::sqrt(std::max(0.0, 1.0 - c[i] * c[i]));
      if (std::abs(s[i]) <= 1e-10) coplanar = true;
    }
    if (coplanar) continue;  // x on the face's plane but outside it: no contribution
    for (int i = 0; i < 3; ++i) {
      const int ip = (i + 1) % 3;
      const int im = (i + 2) % 3;
      const double w = (theta[i] - c[ip] * theta[im] - c[im] * theta[ip]) / (d[i] * sin_t[ip] * s[im]);
      sink(f[i], scale * w);
    }
  }
  return true;
}

// Green coordinates per face in closed form: phi accumulates the double-layer
// potential of each vertex hat function, psi is the single-layer potential of the face
// (integral of 1 / (4 pi r)). With outward unit normals n_k,
//   x = sum_j phi_j v_j + sum_k psi_k n_k   for x inside the cage.
template <class VertexSink, class FaceSink>
bool gc_accumulate(const Cage& cage, const Point3& x, VertexSink&& vsink, FaceSink&& fsink) {
  const auto& verts = cage.vertices();
  const auto& faces = cage.faces();
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const auto& f = faces[k];
    const Point3 t[3] = {verts[f[0]], verts[f[1]], verts[f[2]]};
    const Vec3& n = cage.face_normal(k);
    const double area = cage.face_area(k);

    Vec3 e[3];
    double len[3];
    for (int v = 0; v < 3; ++v) {
      e[v] = t[v] - x;
      len[v] = norm(e[v]);
      if (len[v] < kEps) return false;
    }
    const double det = dot(e[0], cross(e[1], e[2]));
    const double div = len[0] * len[1] * len[2] + dot(e[0], e[1]) * len[2] + dot(e[0], e[2]) * len[1] +
                       dot(e[1], e[2]) * len[0];
    const double solid = 2.0 * std::atan2(det, div) / (4.0 * kPi);
    const double volume = det / 6.0;

    double cterm[3];
    Vec3 edge[3];
    for (int v = 0; v < 3; ++v) {
      edge[v] = t[(v + 1) % 3] - t[(v + 2) % 3];
      const double el = norm(edge[v]);
      const double r = len[(v + 1) % 3] + len[(v + 2) % 3];
      if (r - el <= 0.0) return false;  // x on this edge
      cterm[v] = std::log((r + el) / (r - el)) / (4.0 * kPi * el);
    }

    Vec3 pt = -solid * n;
    for (int v = 0; v < 3; ++v) pt += cross(n, cterm[v] * edge[v]);

    double psi = -3.0 * solid * volume / area;
    for (int v = 0; v < 3; ++v) {
      const Vec3 j = cross(e[(v + 2) % 3], e[(v + 1) % 3]);
      psi -= cterm[v] * dot(j, n);
      vsink(f[v], dot(pt, j) / (2.0 * area));
    }
    fsink(k, psi);
  }
  return true;
}

}  // namespace

std::string_view to_string(CoordinateKind kind) {
  switch (kind) {
    case CoordinateKind::MVC:
      return "mvc";
    case CoordinateKind::HC:
      return "hc";
    case CoordinateKind::GC:
      return "gc";
  }
  return "?";
}

CoordinateKind parse_coordinate_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "mvc") return CoordinateKind::MVC;
  if (lower == "hc") return CoordinateKind::HC;
  if (lower == "gc") return CoordinateKind::GC;
  throw InvalidArgument("unknown coordinate kind '" + std::string(text) + "' (expected mvc, hc or gc)");
}

namespace detail {

// Numerically on the surface, mean value coordinates tend to the surface hat basis.
static bool mvc_surface_limit(const Cage& cage, const Point3& x, std::span<double> vertex_weights) {
  const auto cp = cage.closest(x);
  if (cp.distance > 1e-5 * cage.diagonal()) return false;
  std::fill(vertex_weights.begin(), vertex_weights.end(), 0.0);
  const auto hat = cage.hat_basis(cp);
  for (int i = 0; i < hat.count; ++i) vertex_weights[hat.vertex[i]] += hat.weight[i];
  return true;
}

bool mvc_kernel(const Cage& cage, const Point3& x, std::span<double> vertex_weights) {
  std::fill(vertex_weights.begin(), vertex_weights.end(), 0.0);
  double total = 0.0;
  const bool ok = mvc_accumulate(cage, x, [&](std::uint32_t j, double w) {
    vertex_weights[j] += w;
    total += w;
  });
  if (!ok) return mvc_surface_limit(cage, x, vertex_weights);
  if (!(std::abs(total) > 0.0) || !std::isfinite(total)) return false;
  for (auto& w : vertex_weights) w /= total;
  return true;
}

bool gc_kernel(const Cage& cage, const Point3& x, std::span<double> vertex_weights, std::span<double> face_weights) {
  std::fill(vertex_weights.begin(), vertex_weights.end(), 0.0);
  std::fill(face_weights.begin(), face_weights.end(), 0.0);
  return gc_accumulate(
      cage, x, [&](std::uint32_t j, double w) { vertex_weights[j] += w; },
      [&](std::size_t k, double psi) { face_weights[k] = psi; });
}

bool mvc_map(const Cage& cage, const ReconstructionTargets& targets, const Point3& x, Point3& out) {
  Vec3 acc;
  double total = 0.0;
  const bool ok = mvc_accumulate(cage, x, [&](std::uint32_t j, double w) {
    acc += w * targets.vertices[j];
    total += w;
  });
  if (!ok) {
    std::vector<double> w(cage.num_vertices());
    if (!mvc_surface_limit(cage, x, w)) return false;
    out = targets.apply(w, {});
    return true;
  }
  if (!(std::abs(total) > 0.0) || !std::isfinite(total)) return false;
  out = acc / total;
  return is_finite(out);
}

bool gc_map(const Cage& cage, const ReconstructionTargets& targets, const Point3& x, Point3& out) {
  Vec3 acc;
  const bool ok = gc_accumulate(
      cage, x, [&](std::uint32_t j, double w) { acc += w * targets.vertices[j]; },
      [&](std::size_t k, double psi) { acc += psi * targets.scaled_normals[k]; });
  if (!ok) return false;
  out = acc;
  return is_finite(out);
}

}  // namespace detail

namespace {

void require_interior(const Cage& cage, const Point3& x) {
  if (!is_finite(x) || !cage.contains(x) || cage.closest(x).distance < surface_epsilon(cage)) {
    throw GeometryError("point too close to cage surface");
  }
}

}  // namespace

CageWeights mvc_weights(const Cage& cage, const Point3& x) {
  require_interior(cage, x);
  CageWeights w;
  w.vertex_weights.resize(cage.num_vertices());
  if (!detail::mvc_kernel(cage, x, w.vertex_weights)) throw GeometryError("point too close to cage surface");
  return w;
}

CageWeights green_weights(const Cage& cage, const Point3& x) {
  require_interior(cage, x);
  CageWeights w;
  w.vertex_weights.resize(cage.num_vertices());
  w.face_weights.resize(cage.num_faces());
  if (!detail::gc_kernel(cage, x, w.vertex_weights, w.face_weights)) {
    throw GeometryError("point too close to cage surface");
  }
  return w;
}

std::vector<double> gc_stretch_factors(const Cage& source, const Cage& target) {
  if (source.faces() != target.faces()) throw GeometryError("stretch factors need cages of identical topology");
  std::vector<double> s(source.num_faces());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& f = source.faces()[k];
    const auto& a = source.vertices();
    const auto& b = target.vertices();
    const Vec3 u = a[f[1]] - a[f[0]];
    const Vec3 v = a[f[2]] - a[f[0]];
    const Vec3 up = b[f[1]] - b[f[0]];
    const Vec3 vp = b[f[2]] - b[f[0]];
    const double num = squared_norm(up) * squared_norm(v) - 2.0 * dot(up, vp) * dot(u, v) + squared_norm(vp) * squared_norm(u);
    s[k] = std::sqrt(std::max(0.0, num)) / (std::sqrt(8.0) * source.face_area(k));
  }
  return s;
}

ReconstructionTargets ReconstructionTargets::from_pair(const CagePair& pair, CoordinateKind kind) {
  ReconstructionTargets t;
  t.vertices = pair.canonical.vertices();
  if (kind == CoordinateKind::GC) {
    const auto s = gc_stretch_factors(pair.deformed, pair.canonical);
    t.scaled_normals.resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) t.scaled_normals[k] = s[k] * pair.canonical.face_normal(k);
  }
  return t;
}

Point3 ReconstructionTargets::apply(std::span<const double> vertex_weights, std::span<const double> face_weights) const {
  if (vertex_weights.size() != vertices.size()) throw InvalidArgument("weight count does not match cage vertex count");
  Point3 p;
  for (std::size_t j = 0; j < vertices.size(); ++j) p += vertex_weights[j] * vertices[j];
  if (!face_weights.empty()) {
    if (face_weights.size() != scaled_normals.size()) throw InvalidArgument("face weight count does not match cage face count");
    for (std::size_t k = 0; k < scaled_normals.size(); ++k) p += face_weights[k] * scaled_normals[k];
  }
  return p;
}

Point3 apply_weights(const CageWeights& weights, const CagePair& pair, CoordinateKind kind) {
  if (kind == CoordinateKind::GC && weights.face_weights.size() != pair.canonical.num_faces()) {
    throw InvalidArgument("green coordinates need one face weight per cage face");
  }
  return ReconstructionTargets::from_pair(pair, kind).apply(weights.vertex_weights, kind == CoordinateKind::GC
                                                                                        ? std::span<const double>(weights.face_weights)
                                                                                        : std::span<const double>());
}

Point3 reconstruct(const CageWeights& weights, const Cage& cage, CoordinateKind kind) {
  if (weights.vertex_weights.size() != cage.num_vertices()) {
    throw InvalidArgument("weight count does not match cage vertex count");
  }
  Point3 p;
  for (std::size_t j = 0; j < cage.num_vertices(); ++j) p += weights.vertex_weights[j] * cage.vertices()[j];
  if (kind == CoordinateKind::GC) {
    if (weights.face_weights.size() != cage.num_faces()) throw InvalidArgument("face weight count mismatch");
    for (std::size_t k = 0; k < cage.num_faces(); ++k) p += weights.face_weights[k] * cage.face_normal(k);
  }
  return p;
}

}  // namespace cagewarp
