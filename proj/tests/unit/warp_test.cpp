// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "cagewarp/io_util.hpp"
#include "cagewarp/scene.hpp"
#include "cagewarp/warp.hpp"
#include "scenes.hpp"
#include "test_util.hpp"

namespace cagewarp {
namespace {

using testing::interior_points;
using testing::l_shape;
using testing::translated;
using testing::unit_cube;

std::shared_ptr<const CoordGrid> make_grid(const Cage& cage, CoordinateKind kind, int n) {
  return std::make_shared<const CoordGrid>(precompute_coord_grid(cage, kind, n));
}

DeformConfig cfg(CoordinateKind kind, int n, bool precise = false) {
  DeformConfig c;
  c.kind = kind;
  c.n = n;
  c.precise = precise;
  return c;
}

TEST(CoordLattice, TwoCellMargin) {
  const Aabb b({0, 0, 0}, {1, 2, 3});
  const Lattice l = coord_lattice(b, 21);
  EXPECT_EQ(l.res, (std::array<int, 3>{21, 21, 21}));
  EXPECT_NEAR(l.spacing().x, 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(l.domain.min.x, -2.0 / 16.0, 1e-15);
  EXPECT_NEAR(l.domain.max.z, 3.0 + 2.0 * 3.0 / 16.0, 1e-12);
  EXPECT_THROW(coord_lattice(b, 8), InvalidArgument);
}

TEST(CoordGrid, MvcCoversInteriorAndSumsToOne) {
  const Cage cage(l_shape());
  const auto g = precompute_coord_grid(cage, CoordinateKind::MVC, 24);
  EXPECT_EQ(g.evaluations, g.valid_count());
  for (std::size_t n = 0; n < g.lattice.count(); ++n) {
    if (cage.contains(g.lattice.node(n))) ASSERT_TRUE(g.valid(n));
  }
  for (const auto& x : interior_points(cage, 200, 0.0, 3)) {
    const auto w = sample_weights(g, x);
    ASSERT_TRUE(w.has_value());
    double s = 0.0;
    for (double v : w->vertex_weights) s += v;
    ASSERT_NEAR(s, 1.0, 1e-5);
  }
  EXPECT_FALSE(sample_weights(g, {5, 5, 5}).has_value());
}

TEST(CoordGrid, GreenRowsCarryFaceWeights) {
  const Cage cage(unit_cube());
  const auto g = precompute_coord_grid(cage, CoordinateKind::GC, 16);
  EXPECT_EQ(g.num_faces, cage.num_faces());
  EXPECT_EQ(g.row_size(), cage.num_vertices() + cage.num_faces());
}

TEST(CoordGrid, HarmonicRowsSolveOnTheSameLattice) {
  const Cage cage(unit_cube());
  const auto g = precompute_coord_grid(cage, CoordinateKind::HC, 24);
  EXPECT_EQ(g.num_faces, 0u);
  const auto w = sample_weights(g, {0, 0, 0});
  ASSERT_TRUE(w.has_value());
  for (double v : w->vertex_weights) EXPECT_NEAR(v, 0.125, 1e-2);
}

TEST(Cwg, RoundTripAndErrors) {
  const Cage cage(unit_cube());
  const auto g = precompute_coord_grid(cage, CoordinateKind::GC, 16);
  const auto bytes = encode_coord_grid(g);
  EXPECT_EQ(bytes.substr(0, 4), "CWG1");
  const auto back = decode_coord_grid(bytes);
  EXPECT_EQ(back.kind, g.kind);
  EXPECT_EQ(back.lattice, g.lattice);
  EXPECT_EQ(back.slot, g.slot);
  EXPECT_EQ(back.weights, g.weights);
  EXPECT_THROW(decode_coord_grid("XXXX" + bytes.substr(4)), ParseError);
  EXPECT_THROW(decode_coord_grid(bytes.substr(0, bytes.size() - 3)), ParseError);
  EXPECT_THROW(decode_coord_grid(bytes + "!"), ParseError);
}

TEST(Cwg, CacheKeyTracksInputs) {
  const Cage a(unit_cube());
  const Cage b(translated(unit_cube(), {0, 0, 1e-9}));
  const auto key = coord_cache_key(a, CoordinateKind::MVC, 64);
  EXPECT_EQ(key, coord_cache_key(Cage(unit_cube()), CoordinateKind::MVC, 64));
  EXPECT_NE(key, coord_cache_key(a, CoordinateKind::GC, 64));
  EXPECT_NE(key, coord_cache_key(a, CoordinateKind::MVC, 65));
  EXPECT_NE(key, coord_cache_key(b, CoordinateKind::MVC, 64));
}

TEST(Membership, AgreesWithWindingNumber) {
  for (const TriMesh& m : {unit_cube(), l_shape(), make_icosphere_mesh({0.1, 0, 0}, 0.6, 1)}) {
    const Cage cage(m);
    const Membership mem(cage, 32);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int i = 0; i < 3000; ++i) {
      const Point3 p{u(rng), u(rng), u(rng)};
      ASSERT_EQ(mem.contains(p), point_in_mesh(m, p));
    }
    // Points hugging the surface from both sides.
    for (const auto& v : m.vertices) {
      for (double s : {0.999, 1.001}) ASSERT_EQ(mem.contains(s * v), point_in_mesh(m, s * v));
    }
  }
}

TEST(Deformer, ConfigurationErrors) {
  const auto pair = std::make_shared<const CagePair>(CagePair::identity(unit_cube()));
  EXPECT_THROW(Deformer(pair, cfg(CoordinateKind::HC, 32, true), nullptr), InvalidArgument);
  EXPECT_THROW(Deformer(pair, cfg(CoordinateKind::MVC, 32), nullptr), InvalidArgument);
  const auto g = make_grid(pair->deformed, CoordinateKind::MVC, 20);
  EXPECT_THROW(Deformer(pair, cfg(CoordinateKind::MVC, 32, true), g), InvalidArgument);
  EXPECT_THROW(Deformer(pair, cfg(CoordinateKind::GC, 20), g), InvalidArgument);
  EXPECT_THROW(Deformer(pair, cfg(CoordinateKind::MVC, 24), g), InvalidArgument);
  const auto moved = std::make_shared<const CagePair>(translated(unit_cube(), {0.1, 0, 0}), unit_cube());
  EXPECT_THROW(Deformer(moved, cfg(CoordinateKind::MVC, 20), g), InvalidArgument);
  EXPECT_NO_THROW(Deformer(pair, cfg(CoordinateKind::MVC, 20), g));
}

TEST(Deformer, TranslationMapsPositionsAndKeepsDirections) {
  const Vec3 t{0.3, -0.2, 0.1};
  const auto pair = std::make_shared<const CagePair>(translated(unit_cube(), t), unit_cube());
  for (auto kind : {CoordinateKind::MVC, CoordinateKind::HC, CoordinateKind::GC}) {
    const Deformer d(pair, cfg(kind, 32), make_grid(pair->deformed, kind, 32));
    const UnitDir3 dir = UnitDir3::normalize({1, 2, -0.5});
    for (const auto& x : interior_points(pair->deformed, 50, 0.05, 4)) {
      ASSERT_NEAR(distance(d.phi_x(x), x - t), 0.0, kind == CoordinateKind::HC ? 1e-3 : 1e-5) << to_string(kind);
      ASSERT_NEAR(distance(d.phi_d(x, dir).vec(), dir.vec()), 0.0, kind == CoordinateKind::HC ? 1e-2 : 1e-4);
    }
    EXPECT_THROW(d.phi_x({3, 3, 3}), GeometryError);
    EXPECT_EQ(d.counters().fallbacks, 0u);
  }
}

TEST(Deformer, RotationMapsDirectionsBack) {
  const Similarity rot = Similarity::rotate_z90(1, {0, 0, 0});
  const auto pair = std::make_shared<const CagePair>(testing::apply_similarity(unit_cube(), rot), unit_cube());
  const Deformer d(pair, cfg(CoordinateKind::MVC, 0, true), nullptr);
  // Deformed +y corresponds to canonical +x.
  const auto back = d.phi_d({0.1, 0.1, 0.0}, UnitDir3({0, 1, 0}));
  EXPECT_NEAR(back.vec().x, 1.0, 1e-6);
  EXPECT_GT(d.counters().precise_evaluations, 0u);
}

TEST(Deformer, FastPathMatchesReference) {
  TriMesh bent = l_shape();
  for (auto& v : bent.vertices) v += 0.1 * Vec3{std::sin(3 * v.y), std::cos(2 * v.z), v.x * v.y};
  const auto pair = std::make_shared<const CagePair>(l_shape(), bent);
  for (auto kind : {CoordinateKind::MVC, CoordinateKind::GC}) {
    const Deformer d(pair, cfg(kind, 24), make_grid(pair->deformed, kind, 24));
    for (const auto& x : interior_points(pair->deformed, 300, 0.0, 8)) {
      ASSERT_NEAR(distance(d.phi_x(x), d.phi_x_reference(x)), 0.0, 1e-6);
    }
  }
}

TEST(Deformer, GridConvergesToPrecise) {
  TriMesh bent = unit_cube();
  for (auto& v : bent.vertices) v += 0.1 * Vec3{std::sin(3 * v.y), std::cos(2 * v.z), v.x * v.y};
  const auto pair = std::make_shared<const CagePair>(unit_cube(), bent);
  const Deformer exact(pair, cfg(CoordinateKind::MVC, 0, true), nullptr);
  const auto pts = interior_points(pair->deformed, 300, 1e-3, 12);
  double prev = 1e9;
  for (int n : {16, 32}) {
    const Deformer d(pair, cfg(CoordinateKind::MVC, n), make_grid(pair->deformed, CoordinateKind::MVC, n));
    double err = 0.0;
    for (const auto& x : pts) err += distance(d.phi_x(x), exact.phi_x(x));
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(Deformer, QueryBranches) {
  const auto pair = std::make_shared<const CagePair>(translated(unit_cube(), {0.8, 0, 0}), unit_cube());
  const Deformer d(pair, cfg(CoordinateKind::MVC, 24), make_grid(pair->deformed, CoordinateKind::MVC, 24));
  VoxelRadianceField field(Lattice({5, 5, 5}, Aabb({-2, -2, -2}, {2, 2, 2})), 0);
  std::fill(field.density().begin(), field.density().end(), 2.0f);
  const UnitDir3 dir({0, 0, 1});
  EXPECT_EQ(d.classify({-0.3, 0, 0}), Region::Cleared);
  const auto cleared = d.query(field, {-0.3, 0, 0}, dir);
  EXPECT_EQ(cleared.sigma, 0.0);
  EXPECT_EQ(cleared.rgb.x, 0.0);
  EXPECT_EQ(d.classify({0.4, 0, 0}), Region::Mapped);
  EXPECT_EQ(d.classify({-1.5, 0, 0}), Region::Unchanged);
  EXPECT_DOUBLE_EQ(d.query(field, {-1.5, 0, 0}, dir).sigma, field.sample_density({-1.5, 0, 0}));
  EXPECT_DOUBLE_EQ(deformed_query(field, d, {0.4, 0, 0}, dir).sigma, 2.0);
}

TEST(Deformer, DeltaTDefaultsToCageScale) {
  const auto pair = std::make_shared<const CagePair>(CagePair::identity(unit_cube()));
  const Deformer d(pair, cfg(CoordinateKind::MVC, 0, true), nullptr);
  EXPECT_NEAR(d.delta_t(), 5e-3 * std::sqrt(3.0), 1e-15);
  DeformConfig c = cfg(CoordinateKind::MVC, 0, true);
  c.delta_t = 0.01;
  EXPECT_EQ(Deformer(pair, c, nullptr).delta_t(), 0.01);
  c.delta_t = -1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

}  // namespace
}  // namespace cagewarp
