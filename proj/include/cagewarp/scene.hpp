// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cagewarp/field.hpp"

namespace cagewarp {

/// View-dependent color term: color(d) = rgb + (amplitude / 2) * dot(d, axis), so the
/// colors seen along +axis and -axis differ by `amplitude`.
struct ColorLobe {
  double amplitude = 0.0;
  UnitDir3 axis;
};

struct Primitive {
  enum class Shape { Sphere, Box };
  Shape shape = Shape::Sphere;
  Point3 center;
  double radius = 0.0;
  Aabb box;
  double density = 0.0;
  Vec3 rgb;
  std::optional<ColorLobe> lobe;

  Aabb bounds() const;
  /// Closed membership (boundary included).
  bool contains(const Point3& p) const;
};

/// Analytic stand-in for an optimized scene: primitives over an empty background.
/// Where primitives overlap, the later one wins.
struct AnalyticSceneSpec {
  Aabb domain;
  int sh_degree = 1;
  std::vector<Primitive> primitives;

  /// Throws InvalidArgument for primitives outside the domain, negative density or
  /// colors outside [0, 1].
  void validate() const;

  /// Exact scene value at (p, d): the last primitive containing p, or empty.
  RadianceSample evaluate(const Point3& p, const UnitDir3& d) const;
};

/// Node values from exact evaluation; degree-0 coefficients are rgb / C0 and the lobe
/// goes into band 1.
VoxelRadianceField bake_analytic(const AnalyticSceneSpec& spec, int res);
VoxelRadianceField bake_analytic(const AnalyticSceneSpec& spec, std::array<int, 3> res);

/// JSON document:
///   {"domain": {"min": [x,y,z], "max": [x,y,z]}, "sh_degree": 1,
///    "primitives": [{"type": "sphere", "center": [..], "radius": r, "density": s, "rgb": [..],
///                    "lobe": {"amplitude": a, "axis": [..]}},
///                   {"type": "box", "min": [..], "max": [..], "density": s, "rgb": [..]}]}
AnalyticSceneSpec parse_scene(const std::string& json_text);
AnalyticSceneSpec load_scene(const std::filesystem::path& path);
std::string format_scene(const AnalyticSceneSpec& spec);

/// x -> scale * R x + t with R a rotation. Boxes stay axis-aligned only when R is a signed
/// permutation; other rotations are rejected for boxes.
struct Similarity {
  std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  double scale = 1.0;
  Vec3 translation;

  Point3 apply(const Point3& p) const;
  Vec3 rotate(const Vec3& v) const;

  static Similarity translate(const Vec3& t);
  /// Rotation about the z axis by a multiple of 90 degrees around `pivot`.
  static Similarity rotate_z90(int quarter_turns, const Point3& pivot);
  static Similarity uniform_scale(double s, const Point3& pivot);
};

/// Moves the selected primitives (by index) and rotates their lobes; the domain is kept.
AnalyticSceneSpec transform_primitives(const AnalyticSceneSpec& spec, const Similarity& xf,
                                       const std::vector<std::size_t>& indices);

}  // namespace cagewarp
