// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <vector>

#include "cagewarp/vec.hpp"

namespace cagewarp {

using Face = std::array<std::uint32_t, 3>;

/// Triangle mesh. Faces are counter-clockwise when seen from outside.
struct TriMesh {
  std::vector<Point3> vertices;
  std::vector<Face> faces;

  bool empty() const { return faces.empty(); }
  Aabb bounds() const;

  /// Throws GeometryError when a face index is out of range or repeated within a face.
  void validate() const;
};

// Mesh predicates and queries --------------------------------------------------------------

/// Every directed edge appears exactly once and its reverse exactly once, and the
/// faces form a single edge-connected component.
bool is_watertight(const TriMesh& mesh);

/// Signed enclosed volume (positive for outward orientation of a closed mesh).
double signed_volume(const TriMesh& mesh);

/// Flips every face when the enclosed volume is negative. Requires a watertight mesh.
void orient_outward(TriMesh& mesh);

/// Generalized winding number: sum of signed solid angles / 4π. No topology checks.
double winding_number(const TriMesh& mesh, const Point3& p);

/// Inside test via winding number >= 0.5. Throws GeometryError for non-watertight meshes.
/// Points on the surface may land on either side.
bool point_in_mesh(const TriMesh& mesh, const Point3& p);

/// Classic parity ray casting along a fixed skewed direction. Used as an independent
/// cross-check of the winding-number test.
bool point_in_mesh_parity(const TriMesh& mesh, const Point3& p);

struct ClosestPoint {
  Point3 point;
  std::size_t face = 0;
  std::array<double, 3> bary{};  // barycentric coordinates of `point` within `face`
  double distance = 0.0;
};

ClosestPoint closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c);
ClosestPoint closest_point(const TriMesh& mesh, const Point3& p);

/// Separating-axis triangle/box overlap test (conservative: touching counts as overlap).
bool triangle_box_overlap(const Point3& a, const Point3& b, const Point3& c, const Aabb& box);

// Cages ------------------------------------------------------------------------------------

/// Watertight, outward-oriented cage with cached per-face data.
class Cage {
 public:
  /// Throws GeometryError when the mesh is not a single watertight component.
  explicit Cage(TriMesh mesh);

  const TriMesh& mesh() const { return mesh_; }
  const std::vector<Point3>& vertices() const { return mesh_.vertices; }
  const std::vector<Face>& faces() const { return mesh_.faces; }
  std::size_t num_vertices() const { return mesh_.vertices.size(); }
  std::size_t num_faces() const { return mesh_.faces.size(); }

  const Aabb& bounds() const { return bounds_; }
  double diagonal() const { return bounds_.diagonal(); }

  /// Unit outward normal and area of face k.
  const Vec3& face_normal(std::size_t k) const { return normals_[k]; }
  double face_area(std::size_t k) const { return areas_[k]; }

  bool contains(const Point3& p) const { return winding_number(mesh_, p) >= 0.5; }
  ClosestPoint closest(const Point3& p) const { return closest_point(mesh_, p); }

  /// Angle-weighted pseudo-normal at the closest feature (face, edge or vertex); its sign
  /// against (p - closest) tells inside from outside.
  Vec3 pseudo_normal(const ClosestPoint& cp) const;

  /// Point inside the cage at least offset / 2 from the surface, found by stepping `offset`
  /// inward from the closest surface point (repeated near edges and corners).
  Point3 project_inside(const Point3& p, double offset) const;

  /// Triangles carrying the piecewise-linear vertex basis. Two coplanar faces forming a
  /// convex quad are replaced by both of the quad's triangulations at half weight, so the
  /// basis does not depend on which diagonal the mesh happens to use.
  struct BasisTriangle {
    Face v;
    double scale;
  };
  const std::vector<BasisTriangle>& basis_triangles() const { return basis_; }

  /// Vertex basis values at a surface point (a handful of non-zero entries).
  struct HatWeights {
    static constexpr int kCapacity = 16;
    std::array<std::uint32_t, kCapacity> vertex{};
    std::array<double, kCapacity> weight{};
    int count = 0;

    void add(std::uint32_t v, double w);
  };
  HatWeights hat_basis(const ClosestPoint& cp) const;
  /// Hat basis at the closest surface point of p, averaged over all equally close
  /// points so the value does not depend on how ties are broken.
  HatWeights surface_value(const Point3& p) const;

 private:
  void pair_coplanar_faces(const std::unordered_map<std::uint64_t, std::size_t>& directed);

  TriMesh mesh_;
  Aabb bounds_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  std::vector<Vec3> vertex_normals_;
  std::vector<std::array<Vec3, 3>> edge_normals_;  // per face, edge (i, i+1)
  std::vector<BasisTriangle> basis_;
  std::vector<std::array<Face, 2>> alt_triangulation_;  // other diagonal of a paired face
  std::vector<std::uint8_t> paired_;
};

/// Deformed cage (source of coordinates) paired with the canonical cage of identical
/// topology. Deformed-space samples are expressed in coordinates of `deformed` and
/// reconstructed with the vertices of `canonical`.
struct CagePair {
  Cage deformed;
  Cage canonical;

  /// Throws GeometryError when the face lists differ or either cage is not watertight.
  CagePair(TriMesh deformed_mesh, TriMesh canonical_mesh);

  static CagePair identity(const TriMesh& mesh) { return CagePair(mesh, mesh); }
};

/// Vertices (1 - t) * canonical + t * deformed with the shared faces. t in [0, 1].
TriMesh interpolate_cage(const CagePair& pair, double t);

// OBJ interchange --------------------------------------------------------------------------

/// Reads `v` and `f` records (1-based or negative indices, triangles only). Watertight
/// meshes are re-oriented outward.
TriMesh load_obj(const std::filesystem::path& path);
TriMesh parse_obj(const std::string& text);
void save_obj(const TriMesh& mesh, const std::filesystem::path& path);
std::string format_obj(const TriMesh& mesh);

// Test and demo shapes ---------------------------------------------------------------------

/// Axis-aligned box triangulated into 12 faces, outward orientation.
TriMesh make_box_mesh(const Aabb& box);
/// Unit-spaced L-shaped prism (non-convex), scaled into `box`.
TriMesh make_l_shape_mesh(const Aabb& box);
/// Icosphere with the given subdivision level (0 -> 12 vertices, 1 -> 42, 2 -> 162).
TriMesh make_icosphere_mesh(const Point3& center, double radius, int subdivisions);

}  // namespace cagewarp
