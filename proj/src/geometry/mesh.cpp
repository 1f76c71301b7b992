// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <numbers>
#include <unordered_map>

namespace cagewarp {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t(a) << 32) | std::uint64_t(b); }

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

double triangle_solid_angle(const Point3& p, const Point3& v0, const Point3& v1, const Point3& v2) {
  const Vec3 a = v0 - p;
  const Vec3 b = v1 - p;
  const Vec3 c = v2 - p;
  const double la = norm(a);
  const double lb = norm(b);
  const double lc = norm(c);
  const double det = dot(a, cross(b, c));
  const double div = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
  return 2.0 * std::atan2(det, div);
}

}  // namespace

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const auto& v : vertices) box.extend(v);
  return box;
}

void TriMesh::validate() const {
  const auto n = vertices.size();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& face = faces[f];
    for (auto idx : face) {
      if (idx >= n) throw GeometryError("face " + std::to_string(f) + " references vertex out of range");
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw GeometryError("face " + std::to_string(f) + " repeats a vertex");
    }
  }
}

bool is_watertight(const TriMesh& mesh) {
  if (mesh.faces.empty()) return false;
  try {
    mesh.validate();
  } catch (const GeometryError&) {
    return false;
  }
  std::unordered_map<std::uint64_t, std::size_t> directed;  // edge -> face
  directed.reserve(mesh.faces.size() * 3);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    for (int i = 0; i < 3; ++i) {
      if (!directed.emplace(edge_key(face[i], face[(i + 1) % 3]), f).second) return false;
    }
  }
  DisjointSet components(mesh.faces.size());
  for (const auto& [key, f] : directed) {
    const auto a = static_cast<std::uint32_t>(key >> 32);
    const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
    auto twin = directed.find(edge_key(b, a));
    if (twin == directed.end()) return false;
    components.unite(f, twin->second);
  }
  const auto root = components.find(0);
  for (std::size_t f = 1; f < mesh.faces.size(); ++f) {
    if (components.find(f) != root) return false;
  }
  return true;
}

double signed_volume(const TriMesh& mesh) {
  double vol = 0.0;
  for (const auto& f : mesh.faces) {
    vol += dot(mesh.vertices[f[0]], cross(mesh.vertices[f[1]], mesh.vertices[f[2]]));
  }
  return vol / 6.0;
}

void orient_outward(TriMesh& mesh) {
  if (!is_watertight(mesh)) throw GeometryError("cannot orient a mesh that is not watertight");
  if (signed_volume(mesh) < 0.0) {
    for (auto& f : mesh.faces) std::swap(f[1], f[2]);
  }
}

double winding_number(const TriMesh& mesh, const Point3& p) {
  double total = 0.0;
  for (const auto& f : mesh.faces) {
    total += triangle_solid_angle(p, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
  }
  return total / (4.0 * std::numbers::pi);
}

bool point_in_mesh(const TriMesh& mesh, const Point3& p) {
  if (!is_watertight(mesh)) throw GeometryError("point_in_mesh requires a watertight mesh");
  return winding_number(mesh, p) >= 0.5;
}

bool point_in_mesh_parity(const TriMesh& mesh, const Point3& p) {
  // Irrational-looking direction keeps hits away from edges of axis-aligned test meshes.
  const Vec3 dir = Vec3{0.5413, 0.6152, 0.5731} / norm(Vec3{0.5413, 0.6152, 0.5731});
  int crossings = 0;
  for (const auto& f : mesh.faces) {
    const Point3& v0 = mesh.vertices[f[0]];
    const Vec3 e1 = mesh.vertices[f[1]] - v0;
    const Vec3 e2 = mesh.vertices[f[2]] - v0;
    const Vec3 pv = cross(dir, e2);
    const double det = dot(e1, pv);
    if (std::abs(det) < 1e-15) continue;
    const double inv = 1.0 / det;
    const Vec3 tv = p - v0;
    const double u = dot(tv, pv) * inv;
    if (u < 0.0 || u > 1.0) continue;
    const Vec3 qv = cross(tv, e1);
    const double v = dot(dir, qv) * inv;
    if (v < 0.0 || u + v > 1.0) continue;
    if (dot(e2, qv) * inv > 0.0) ++crossings;
  }
  return (crossings % 2) == 1;
}

ClosestPoint closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  // Region classification after Ericson, Real-Time Collision Detection, 5.1.5.
  ClosestPoint out;
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  auto finish = [&](double u, double v, double w) {
    out.bary = {u, v, w};
    out.point = u * a + v * b + w * c;
    out.distance = distance(p, out.point);
    return out;
  };
  if (d1 <= 0.0 && d2 <= 0.0) return finish(1.0, 0.0, 0.0);
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return finish(0.0, 1.0, 0.0);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return finish(1.0 - v, v, 0.0);
  }
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return finish(0.0, 0.0, 1.0);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return finish(1.0 - w, 0.0, w);
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return finish(0.0, 1.0 - w, w);
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return finish(1.0 - v - w, v, w);
}

ClosestPoint closest_point(const TriMesh& mesh, const Point3& p) {
  ClosestPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mesh.faces.size(); ++k) {
    const auto& f = mesh.faces[k];
    auto cp = closest_point_on_triangle(p, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    if (cp.distance < best.distance) {
      best = cp;
      best.face = k;
    }
  }
  return best;
}

namespace {

bool axis_separates(const Vec3& axis, const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& half) {
  const double p0 = dot(axis, v0);
  const double p1 = dot(axis, v1);
  const double p2 = dot(axis, v2);
  const double r = half.x * std::abs(axis.x) + half.y * std::abs(axis.y) + half.z * std::abs(axis.z);
  return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
}

}  // namespace

bool triangle_box_overlap(const Point3& a, const Point3& b, const Point3& c, const Aabb& box) {
  const Point3 center = box.center();
  const Vec3 half = 0.5 * box.extent();
  const Vec3 v0 = a - center;
  const Vec3 v1 = b - center;
  const Vec3 v2 = c - center;
  for (int ax = 0; ax < 3; ++ax) {
    const double lo = std::min({v0[ax], v1[ax], v2[ax]});
    const double hi = std::max({v0[ax], v1[ax], v2[ax]});
    if (lo > half[ax] || hi < -half[ax]) return false;
  }
  const Vec3 e[3] = {v1 - v0, v2 - v1, v0 - v2};
  const Vec3 unit[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (const auto& u : unit) {
    for (const auto& edge : e) {
      const Vec3 axis = cross(u, edge);
      if (squared_norm(axis) == 0.0) continue;
      if (axis_separates(axis, v0, v1, v2, half)) return false;
    }
  }
  const Vec3 n = cross(e[0], e[1]);
  if (squared_norm(n) > 0.0 && axis_separates(n, v0, v1, v2, half)) return false;
  return true;
}

Cage::Cage(TriMesh mesh) : mesh_(std::move(mesh)) {
  if (!is_watertight(mesh_)) throw GeometryError("cage is not a single watertight component");
  orient_outward(mesh_);
  bounds_ = mesh_.bounds();
  const auto nf = mesh_.faces.size();
  normals_.resize(nf);
  areas_.resize(nf);
  vertex_normals_.assign(mesh_.vertices.size(), Vec3{});
  std::unordered_map<std::uint64_t, std::size_t> directed;
  for (std::size_t k = 0; k < nf; ++k) {
    const auto& f = mesh_.faces[k];
    const Point3* v[3] = {&mesh_.vertices[f[0]], &mesh_.vertices[f[1]], &mesh_.vertices[f[2]]};
    const Vec3 n = cross(*v[1] - *v[0], *v[2] - *v[0]);
    const double len = norm(n);
    if (!(len > 0.0)) throw GeometryError("cage face " + std::to_string(k) + " is degenerate");
    normals_[k] = n / len;
    areas_[k] = 0.5 * len;
    for (int i = 0; i < 3; ++i) {
      const Vec3 e0 = *v[(i + 1) % 3] - *v[i];
      const Vec3 e1 = *v[(i + 2) % 3] - *v[i];
      const double angle = std::acos(std::clamp(dot(e0, e1) / (norm(e0) * norm(e1)), -1.0, 1.0));
      vertex_normals_[f[i]] += angle * normals_[k];
      directed.emplace(edge_key(f[i], f[(i + 1) % 3]), k);
    }
  }
  edge_normals_.resize(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    const auto& f = mesh_.faces[k];
    for (int i = 0; i < 3; ++i) {
      const auto twin = directed.at(edge_key(f[(i + 1) % 3], f[i]));
      edge_normals_[k][i] = normals_[k] + normals_[twin];
    }
  }
  pair_coplanar_faces(directed);
}

void Cage::pair_coplanar_faces(const std::unordered_map<std::uint64_t, std::size_t>& directed) {
  const auto nf = mesh_.faces.size();
  paired_.assign(nf, 0);
  alt_triangulation_.resize(nf);
  const auto& vs = mesh_.vertices;
  const auto positive = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, const Vec3& n) {
    return dot(cross(vs[b] - vs[a], vs[c] - vs[a]), n) > 1e-9 * squared_norm(bounds_.extent());
  };
  for (std::size_t k = 0; k < nf; ++k) {
    if (paired_[k]) continue;
    const auto& f = mesh_.faces[k];
    bool done = false;
    for (int i = 0; i < 3 && !done; ++i) {
      const std::uint32_t p = f[i], q = f[(i + 1) % 3], r = f[(i + 2) % 3];
      const auto t = directed.at(edge_key(q, p));
      if (paired_[t] || dot(normals_[k], normals_[t]) < 1.0 - 1e-12) continue;
      const auto& g = mesh_.faces[t];
      const std::uint32_t d = g[0] != p && g[0] != q ? g[0] : (g[1] != p && g[1] != q ? g[1] : g[2]);
      // Quad p -> d -> q -> r; the other diagonal is d - r.
      if (!positive(p, d, r, normals_[k]) || !positive(d, q, r, normals_[k])) continue;
      paired_[k] = paired_[t] = 1;
      const std::array<Face, 2> alt{Face{p, d, r}, Face{d, q, r}};
      alt_triangulation_[k] = alt_triangulation_[t] = alt;
      basis_.push_back({f, 0.5});
      basis_.push_back({g, 0.5});
      basis_.push_back({alt[0], 0.5});
      basis_.push_back({alt[1], 0.5});
      done = true;
    }
    if (!done) basis_.push_back({f, 1.0});
  }
}

void Cage::HatWeights::add(std::uint32_t v, double w) {
  for (int i = 0; i < count; ++i) {
    if (vertex[i] == v) {
      weight[i] += w;
      return;
    }
  }
  if (count == kCapacity) throw GeometryError("too many vertices in a surface basis value");
  vertex[count] = v;
  weight[count++] = w;
}

Cage::HatWeights Cage::surface_value(const Point3& p) const {
  std::vector<ClosestPoint> candidates;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mesh_.faces.size(); ++k) {
    const auto& f = mesh_.faces[k];
    auto cp = closest_point_on_triangle(p, mesh_.vertices[f[0]], mesh_.vertices[f[1]], mesh_.vertices[f[2]]);
    cp.face = k;
    best = std::min(best, cp.distance);
    candidates.push_back(cp);
  }
  const double tol = 1e-10 * diagonal();
  std::vector<ClosestPoint> ties;
  for (const auto& cp : candidates) {
    if (cp.distance > best + tol) continue;
    const bool seen = std::any_of(ties.begin(), ties.end(), [&](const ClosestPoint& t) { return distance(t.point, cp.point) <= tol; });
    if (!seen) ties.push_back(cp);
  }
  if (ties.size() == 1) return hat_basis(ties.front());
  HatWeights h;
  for (const auto& cp : ties) {
    const auto part = hat_basis(cp);
    for (int i = 0; i < part.count; ++i) h.add(part.vertex[i], part.weight[i] / double(ties.size()));
  }
  return h;
}

Cage::HatWeights Cage::hat_basis(const ClosestPoint& cp) const {
  HatWeights h;
  const auto add = [&](std::uint32_t v, double w) { h.add(v, w); };
  const auto& f = mesh_.faces[cp.face];
  if (!paired_[cp.face]) {
    for (int i = 0; i < 3; ++i) add(f[i], cp.bary[i]);
    return h;
  }
  for (int i = 0; i < 3; ++i) add(f[i], 0.5 * cp.bary[i]);
  const auto& alt = alt_triangulation_[cp.face];
  const auto& vs = mesh_.vertices;
  const auto c0 = closest_point_on_triangle(cp.point, vs[alt[0][0]], vs[alt[0][1]], vs[alt[0][2]]);
  const auto c1 = closest_point_on_triangle(cp.point, vs[alt[1][0]], vs[alt[1][1]], vs[alt[1][2]]);
  const bool first = c0.distance <= c1.distance;
  const auto& tri = first ? alt[0] : alt[1];
  const auto& bary = first ? c0.bary : c1.bary;
  for (int i = 0; i < 3; ++i) add(tri[i], 0.5 * bary[i]);
  return h;
}

Vec3 Cage::pseudo_normal(const ClosestPoint& cp) const {
  const auto& f = mesh_.faces[cp.face];
  int zeros = 0;
  int nonzero = -1;
  int zero_at = -1;
  for (int i = 0; i < 3; ++i) {
    if (cp.bary[i] == 0.0) {
      ++zeros;
      zero_at = i;
    } else {
      nonzero = i;
    }
  }
  if (zeros == 2) return vertex_normals_[f[nonzero]];
  if (zeros == 1) {
    // Edge opposite the zero coordinate runs from (zero_at + 1) to (zero_at + 2).
    return edge_normals_[cp.face][(zero_at + 1) % 3];
  }
  return normals_[cp.face];
}

Point3 Cage::project_inside(const Point3& p, double offset) const {
  // Re-project from the new closest point until the result clears every face: a step
  // along one face's normal can land on a neighbouring face near an edge or corner.
  Point3 q = p;
  double step = offset;
  for (int it = 0; it < 24; ++it) {
    const auto cp = closest(q);
    if (it > 0 && cp.distance >= 0.5 * offset && contains(q)) return q;
    Vec3 n = pseudo_normal(cp);
    const double len = norm(n);
    n = len > 0.0 ? n / len : normals_[cp.face];
    q = cp.point - step * n;
    if (it % 3 == 2) step *= 4.0;
  }
  return q;
}

CagePair::CagePair(TriMesh deformed_mesh, TriMesh canonical_mesh)
    : deformed([&] {
        if (deformed_mesh.faces != canonical_mesh.faces ||
            deformed_mesh.vertices.size() != canonical_mesh.vertices.size()) {
          throw GeometryError("deformed and canonical cages must share vertex count and face list");
        }
        if (!is_watertight(canonical_mesh)) throw GeometryError("canonical cage is not watertight");
        if (signed_volume(canonical_mesh) < 0.0) {
          for (auto* m : {&deformed_mesh, &canonical_mesh}) {
            for (auto& f : m->faces) std::swap(f[1], f[2]);
          }
        }
        if (signed_volume(deformed_mesh) <= 0.0) throw GeometryError("deformed cage is inverted");
        return Cage(std::move(deformed_mesh));
      }()),
      canonical(std::move(canonical_mesh)) {}

TriMesh interpolate_cage(const CagePair& pair, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("interpolation parameter must lie in [0, 1]");
  TriMesh out;
  out.faces = pair.canonical.faces();
  const auto& a = pair.canonical.vertices();
  const auto& b = pair.deformed.vertices();
  out.vertices.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (t == 0.0) {
      out.vertices[i] = a[i];
    } else if (t == 1.0) {
      out.vertices[i] = b[i];
    } else {
      out.vertices[i] = (1.0 - t) * a[i] + t * b[i];
    }
  }
  return out;
}

TriMesh make_box_mesh(const Aabb& box) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({(i & 1) ? box.max.x : box.min.x, (i & 2) ? box.max.y : box.min.y,
                          (i & 4) ? box.max.z : box.min.z});
  }
  m.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  orient_outward(m);
  return m;
}

TriMesh make_l_shape_mesh(const Aabb& box) {
  // L polygon in the unit-spaced xy plane, extruded along z.
  const double poly[6][2] = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  const Vec3 ext = box.extent();
  TriMesh m;
  for (int layer = 0; layer < 2; ++layer) {
    for (const auto& q : poly) {
      m.vertices.push_back({box.min.x + q[0] / 2.0 * ext.x, box.min.y + q[1] / 2.0 * ext.y,
                            box.min.z + layer * ext.z});
    }
  }
  // Bottom cap (z = min) viewed from below is clockwise in xy, top cap counter-clockwise.
  const std::uint32_t cap[4][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 5}, {3, 4, 5}};
  for (const auto& t : cap) {
    m.faces.push_back({t[0], t[2], t[1]});
    m.faces.push_back({t[0] + 6u, t[1] + 6u, t[2] + 6u});
  }
  for (std::uint32_t i = 0; i < 6; ++i) {
    const std::uint32_t j = (i + 1) % 6;
    m.faces.push_back({i, j, j + 6});
    m.faces.push_back({i, j + 6, i + 6});
  }
  orient_outward(m);
  return m;
}

TriMesh make_icosphere_mesh(const Point3& center, double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                             {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v = v / norm(v);
  std::vector<Face> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                             {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      const Vec3 m = verts[a] + verts[b];
      verts.push_back(m / norm(m));
      const auto idx = static_cast<std::uint32_t>(verts.size() - 1);
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const auto a = midpoint(f[0], f[1]);
      const auto b = midpoint(f[1], f[2]);
      const auto c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
  TriMesh m;
  m.faces = std::move(faces);
  for (const auto& v : verts) m.vertices.push_back(center + radius * v);
  orient_outward(m);
  return m;
}

}  // namespace cagewarp
