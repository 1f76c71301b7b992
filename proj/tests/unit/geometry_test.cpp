// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cagewarp/surface.hpp"
#include "cagewarp/voxelize.hpp"
#include "test_util.hpp"

namespace cagewarp {
namespace {

using testing::l_shape;
using testing::unit_cube;

TEST(Obj, ParsesCube) {
  const std::string text = format_obj(unit_cube());
  const TriMesh m = parse_obj(text);
  EXPECT_EQ(m.vertices.size(), 8u);
  EXPECT_EQ(m.faces.size(), 12u);
}

TEST(Obj, RoundTrip) {
  const TriMesh m = make_icosphere_mesh({0.1, -0.2, 0.3}, 0.7, 1);
  const auto path = std::filesystem::temp_directory_path() / "cagewarp_roundtrip.obj";
  save_obj(m, path);
  const TriMesh r = load_obj(path);
  ASSERT_EQ(r.vertices.size(), m.vertices.size());
  EXPECT_EQ(r.faces, m.faces);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_LE(distance(r.vertices[i], m.vertices[i]), 1e-6);
  std::filesystem::remove(path);
}

TEST(Obj, RejectsQuad) {
  const std::string text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
  try {
    parse_obj(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("non-triangular face at line 5"), std::string::npos) << e.what();
  }
}

TEST(Obj, RejectsOutOfRangeIndex) {
  EXPECT_THROW(parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nf 1 2 9\n"), ParseError);
}

TEST(Obj, RejectsMalformedVertex) {
  try {
    parse_obj("v 0 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Watertight, CubeAndBrokenCube) {
  TriMesh m = unit_cube();
  EXPECT_TRUE(is_watertight(m));
  m.faces.pop_back();
  EXPECT_FALSE(is_watertight(m));
}

TEST(Watertight, TwoComponentsRejected) {
  TriMesh a = unit_cube();
  const TriMesh b = testing::translated(unit_cube(), {3, 0, 0});
  const auto off = static_cast<std::uint32_t>(a.vertices.size());
  a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (auto f : b.faces) a.faces.push_back({f[0] + off, f[1] + off, f[2] + off});
  EXPECT_FALSE(is_watertight(a));
}

TEST(Watertight, ShapesAreClosed) {
  EXPECT_TRUE(is_watertight(l_shape()));
  for (int s = 0; s < 3; ++s) EXPECT_TRUE(is_watertight(make_icosphere_mesh({}, 1.0, s)));
  EXPECT_EQ(make_icosphere_mesh({}, 1.0, 1).vertices.size(), 42u);
  EXPECT_GT(signed_volume(l_shape()), 0.0);
  EXPECT_NEAR(signed_volume(unit_cube()), 1.0, 1e-12);
}

TEST(PointInMesh, CubeExamples) {
  const TriMesh m = unit_cube();
  EXPECT_TRUE(point_in_mesh(m, {0, 0, 0}));
  EXPECT_FALSE(point_in_mesh(m, {2, 0, 0}));
  EXPECT_TRUE(point_in_mesh(m, {0.4999, 0, 0}));
}

TEST(PointInMesh, NonWatertightThrows) {
  TriMesh m = unit_cube();
  m.faces.pop_back();
  EXPECT_THROW(point_in_mesh(m, {0, 0, 0}), GeometryError);
}

TEST(PointInMesh, WindingAgreesWithParity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (const TriMesh& m : {unit_cube(), l_shape(), make_icosphere_mesh({0.05, 0, 0}, 0.6, 2)}) {
    int checked = 0;
    while (checked < 1000) {
      const Point3 p{u(rng), u(rng), u(rng)};
      if (closest_point(m, p).distance < 1e-4) continue;
      ASSERT_EQ(point_in_mesh(m, p), point_in_mesh_parity(m, p)) << p.x << " " << p.y << " " << p.z;
      ++checked;
    }
  }
}

TEST(Voxelize, InsideNodesMatchWinding) {
  const Lattice lat({23, 19, 21}, Aabb({-0.7, -0.7, -0.7}, {0.7, 0.7, 0.7}));
  for (const TriMesh& m : {unit_cube(), l_shape(), make_icosphere_mesh({}, 0.55, 1)}) {
    const auto inside = inside_nodes(m, lat);
    for (std::size_t n = 0; n < lat.count(); ++n) {
      const Point3 p = lat.node(n);
      if (closest_point(m, p).distance < 1e-9) continue;
      ASSERT_EQ(bool(inside[n]), winding_number(m, p) >= 0.5) << n;
    }
  }
}

ScalarGrid sample(const Lattice& lat, auto f) {
  ScalarGrid g(lat);
  for (std::size_t n = 0; n < lat.count(); ++n) g.values[n] = f(lat.node(n));
  return g;
}

TEST(MarchingCubes, SphereOracle) {
  const Lattice lat({64, 64, 64}, Aabb({-1, -1, -1}, {1, 1, 1}));
  const ScalarGrid g = sample(lat, [](const Point3& p) { return norm(p); });
  const TriMesh m = marching_cubes(g, 0.3);
  ASSERT_FALSE(m.empty());
  for (const auto& v : m.vertices) EXPECT_LT(std::abs(norm(v) - 0.3), lat.cell_diagonal());
  EXPECT_TRUE(is_watertight(m));
  // Normals face decreasing scalar: outward for a distance field means inward normals,
  // so the enclosed volume is negative.
  EXPECT_LT(signed_volume(m), 0.0);
  const double expected = 4.0 / 3.0 * std::acos(-1.0) * 0.027;
  EXPECT_NEAR(-signed_volume(m), expected, 0.05 * expected);
}

TEST(MarchingCubes, PlaneOracle) {
  const Lattice lat({16, 16, 16}, Aabb({-1, -1, -1}, {1, 1, 1}));
  const TriMesh m = marching_cubes(sample(lat, [](const Point3& p) { return p.x + 1e-3; }), 0.0);
  ASSERT_FALSE(m.empty());
  for (const auto& v : m.vertices) EXPECT_NEAR(v.x, -1e-3, 1e-6);
  for (const auto& f : m.faces) {
    const Vec3 n = cross(m.vertices[f[1]] - m.vertices[f[0]], m.vertices[f[2]] - m.vertices[f[0]]);
    EXPECT_LT(n.x, 0.0);  // toward decreasing x
  }
}

TEST(MarchingCubes, ConstantGridIsEmpty) {
  const Lattice lat({8, 8, 8}, Aabb({0, 0, 0}, {1, 1, 1}));
  EXPECT_TRUE(marching_cubes(ScalarGrid(lat, -1.0), 0.0).empty());
}

TEST(MarchingCubes, TooSmallGridThrows) {
  ScalarGrid g;
  g.lattice.res = {1, 2, 2};
  EXPECT_THROW(marching_cubes(g, 0.0), InvalidArgument);
}

TEST(CageGen, SphereEnclosed) {
  const Lattice lat({48, 48, 48}, Aabb({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}));
  const ScalarGrid g = sample(lat, [](const Point3& p) { return norm(p) < 0.3 ? 50.0 : 0.0; });
  const GeneratedCage cage = generate_cage(g, {1.0, 2, 8});
  EXPECT_TRUE(is_watertight(cage.mesh));
  EXPECT_GT(signed_volume(cage.mesh), 0.0);
  for (const auto& p : occupied_nodes(g, 1.0)) ASSERT_TRUE(point_in_mesh(cage.mesh, p));
}

TEST(CageGen, BoxEnclosed) {
  const Lattice lat({40, 40, 40}, Aabb({-1, -1, -1}, {1, 1, 1}));
  const ScalarGrid g = sample(lat, [](const Point3& p) {
    return std::abs(p.x) < 0.4 && std::abs(p.y) < 0.3 && std::abs(p.z) < 0.5 ? 10.0 : 0.0;
  });
  const GeneratedCage cage = generate_cage(g, {1.0, 2, 6});
  EXPECT_TRUE(is_watertight(cage.mesh));
  EXPECT_GT(cage.mesh.vertices.size(), 0u);
  for (const auto& p : occupied_nodes(g, 1.0)) ASSERT_TRUE(point_in_mesh(cage.mesh, p));
}

TEST(CageGen, EmptyOccupancy) {
  const Lattice lat({16, 16, 16}, Aabb({0, 0, 0}, {1, 1, 1}));
  try {
    generate_cage(ScalarGrid(lat, 0.0), {});
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("empty occupancy"), std::string::npos);
  }
}

TEST(InterpolateCage, EndpointsAndLinearity) {
  const TriMesh a = unit_cube();
  const TriMesh b = testing::translated(a, {1, 0, 0});
  const CagePair pair(b, a);
  EXPECT_EQ(interpolate_cage(pair, 0.0).vertices, pair.canonical.vertices());
  EXPECT_EQ(interpolate_cage(pair, 1.0).vertices, pair.deformed.vertices());
  const TriMesh mid = interpolate_cage(pair, 0.5);
  for (std::size_t i = 0; i < mid.vertices.size(); ++i) {
    EXPECT_LE(distance(mid.vertices[i], pair.canonical.vertices()[i] + Vec3{0.5, 0, 0}), 1e-15);
  }
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const TriMesh m = interpolate_cage(pair, t);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      const Point3 expect = (1 - t) * pair.canonical.vertices()[i] + t * pair.deformed.vertices()[i];
      EXPECT_LE(distance(m.vertices[i], expect), 1e-15);
    }
  }
  EXPECT_THROW(interpolate_cage(pair, 1.5), InvalidArgument);
  EXPECT_THROW(interpolate_cage(pair, -0.1), InvalidArgument);
}

TEST(CagePair, RejectsTopologyMismatch) {
  EXPECT_THROW(CagePair(unit_cube(), l_shape()), GeometryError);
}

TEST(Cage, ProjectInside) {
  const Cage cage(l_shape());
  for (const Point3 p : {Point3{0.9, 0.9, 0.9}, Point3{0.1, 0.1, 0.0}, Point3{0.5, 0.5, 0.5}, Point3{-0.6, 0, 0}}) {
    const Point3 q = cage.project_inside(p, 1e-3);
    EXPECT_TRUE(cage.contains(q));
    EXPECT_GE(cage.closest(q).distance, 0.5e-3);
  }
}

}  // namespace
}  // namespace cagewarp
