// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "cagewarp/render.hpp"
#include "cagewarp/scene.hpp"
#include "cagewarp/warp.hpp"
#include "test_util.hpp"

namespace cagewarp::testing {

/// Sphere (with a view-dependent lobe) and a box on a 129^3 field over [-1, 1]^3, so
/// node spacing is exactly 1/64. The sphere sits on a node and the cube cage around it
/// leaves the box outside.
inline AnalyticSceneSpec sphere_box_scene() {
  AnalyticSceneSpec s;
  s.domain = Aabb({-1, -1, -1}, {1, 1, 1});
  s.sh_degree = 1;
  Primitive sphere;
  sphere.shape = Primitive::Shape::Sphere;
  sphere.center = {-0.25, 0.0, 0.0};
  sphere.radius = 0.25;
  sphere.density = 40.0;
  sphere.rgb = {0.85, 0.35, 0.2};
  sphere.lobe = ColorLobe{0.2, UnitDir3({1, 0, 0})};
  Primitive box;
  box.shape = Primitive::Shape::Box;
  box.box = Aabb({0.35, -0.6, -0.5}, {0.75, 0.1, 0.1});
  box.density = 30.0;
  box.rgb = {0.2, 0.5, 0.85};
  s.primitives = {sphere, box};
  return s;
}

inline constexpr int kSceneRes = 129;
inline const Point3 kSphereCenter{-0.25, 0.0, 0.0};

inline TriMesh sphere_cage() {
  const double h = 0.32;
  return make_box_mesh(Aabb(kSphereCenter - Vec3{h, h, h}, kSphereCenter + Vec3{h, h, h}));
}

inline TriMesh apply_similarity(TriMesh m, const Similarity& s) {
  for (auto& v : m.vertices) v = s.apply(v);
  return m;
}

inline Camera scene_camera(int size) {
  return Camera::from_fov(size, size, 0.7, look_at({0.4, -2.6, 1.5}, {0.0, -0.05, 0.0}));
}

inline RenderConfig scene_render_config(int samples) {
  RenderConfig c;
  c.samples = samples;
  c.background = {1, 1, 1};
  return c;
}

}  // namespace cagewarp::testing
