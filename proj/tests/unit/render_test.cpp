// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "cagewarp/io_util.hpp"
#include "cagewarp/render.hpp"
#include "scenes.hpp"

namespace cagewarp {
namespace {

TEST(Camera, CenterRayLooksDownMinusZ) {
  const Camera c = Camera::from_fov(4, 4, 0.5 * std::numbers::pi, Mat4{{{1, 0, 0, 1}, {0, 1, 0, 2}, {0, 0, 1, 3}, {0, 0, 0, 1}}});
  EXPECT_DOUBLE_EQ(c.fx, 2.0);
  const Ray r = c.pixel_ray(1, 1);
  EXPECT_EQ(r.origin.x, 1.0);
  // Pixel (1, 1) is up and left of the image center.
  EXPECT_LT(r.dir.vec().x, 0.0);
  EXPECT_GT(r.dir.vec().y, 0.0);
  EXPECT_LT(r.dir.vec().z, 0.0);
  EXPECT_EQ(camera_rays(c).size(), 16u);
}

TEST(Camera, LookAtPointsAtTarget) {
  const Camera c = Camera::from_fov(3, 3, 0.7, look_at({1, -2, 0.5}, {0, 0, 0}));
  const Ray r = c.pixel_ray(1, 1);
  const Vec3 want = UnitDir3::normalize(Vec3{-1, 2, -0.5}).vec();
  EXPECT_NEAR(distance(r.dir.vec(), want), 0.0, 1e-12);
}

TEST(Camera, JsonRoundTrip) {
  const auto cams = orbit_cameras({0, 0, 0}, 3.0, 0.4, 5, 32, 24, 0.7);
  const auto back = parse_cameras(format_cameras(cams));
  ASSERT_EQ(back.size(), 5u);
  EXPECT_EQ(back[2].width, 32);
  EXPECT_EQ(back[2].height, 24);
  EXPECT_NEAR(back[2].fx, cams[2].fx, 1e-9);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(back[3].c2w[r][c], cams[3].c2w[r][c], 1e-12);
  }
  EXPECT_EQ(parse_cameras(format_cameras(cams), 8, 8)[0].width, 8);
}

TEST(Camera, JsonErrors) {
  const std::string ident = R"([[1,0,0,0],[0,1,0,0],[0,0,1,4],[0,0,0,1]])";
  EXPECT_THROW(parse_cameras("[]"), ParseError);
  EXPECT_THROW(parse_cameras(R"({"camera_angle_x": 0.7, "frames": []})", 8, 8), ParseError);
  EXPECT_THROW(parse_cameras(R"({"camera_angle_x": 0.7, "frames": [{"transform_matrix": )" + ident + "}]}"),
               ParseError);  // no image size anywhere
  EXPECT_NO_THROW(parse_cameras(R"({"camera_angle_x": 0.7, "frames": [{"transform_matrix": )" + ident + "}]}", 8, 8));
  EXPECT_THROW(parse_cameras(R"({"camera_angle_x": 0.7, "frames": [{"transform_matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,4]]}]})", 8, 8),
               ParseError);
  EXPECT_THROW(parse_cameras(R"({"camera_angle_x": 0.7, "frames": [{"transform_matrix": [[1,0.1,0,0],[0,1,0,0],[0,0,1,4],[0,0,0,1]]}]})",
                             8, 8),
               ParseError);
  // Slightly off rotations are accepted and cleaned up.
  const auto c = parse_cameras(R"({"camera_angle_x": 0.7, "frames": [{"transform_matrix": [[1,0.00005,0,0],[0,1,0,0],[0,0,1,4],[0,0,0,1]]}]})",
                               8, 8);
  EXPECT_NO_THROW(c[0].validate(1e-12));
}

TEST(Quadrature, HomogeneousSlab) {
  const auto query = [](const Point3& x, const UnitDir3&) {
    return RadianceSample{{0.2, 0.4, 0.6}, x.x >= 0.0 && x.x <= 1.0 ? 3.0 : 0.0};
  };
  const Ray ray{{-1, 0, 0}, UnitDir3({1, 0, 0})};
  const auto r = volume_render_ray(query, ray, 512, 1.0, 2.0, {1, 1, 1}, 0.0);
  EXPECT_NEAR(r.opacity, 1.0 - std::exp(-3.0), 1e-9);
  EXPECT_NEAR(r.weight_sum + r.transmittance, 1.0, 1e-12);
  EXPECT_NEAR(r.rgb.x, 0.2 * r.opacity + r.transmittance, 1e-12);
  EXPECT_GT(r.depth, 1.0);
  EXPECT_NEAR(r.disparity, r.opacity / r.depth, 1e-12);
}

TEST(Quadrature, EmptyRayShowsBackground) {
  const auto query = [](const Point3&, const UnitDir3&) { return RadianceSample{}; };
  const auto r = volume_render_ray(query, Ray{{0, 0, 0}, UnitDir3({0, 0, 1})}, 64, 0.1, 2.0, {1, 0.5, 0});
  EXPECT_EQ(r.opacity, 0.0);
  EXPECT_EQ(r.disparity, 0.0);
  EXPECT_EQ(r.rgb.y, 0.5);
}

TEST(Quadrature, EarlyTerminationKeepsConservation) {
  const auto query = [](const Point3&, const UnitDir3&) { return RadianceSample{{1, 1, 1}, 500.0}; };
  const auto r = volume_render_ray(query, Ray{{0, 0, 0}, UnitDir3({0, 0, 1})}, 512, 0.0, 1.0, {0, 0, 0}, 1e-4);
  EXPECT_LT(r.transmittance, 1e-4);
  EXPECT_NEAR(r.weight_sum + r.transmittance, 1.0, 1e-12);
}

TEST(Quadrature, NonFiniteSampleThrows) {
  const auto query = [](const Point3& x, const UnitDir3&) {
    return RadianceSample{{0, 0, 0}, x.z > 0.5 ? std::nan("") : 1.0};
  };
  EXPECT_THROW(volume_render_ray(query, Ray{{0, 0, 0}, UnitDir3({0, 0, 1})}, 16, 0.0, 1.0, {0, 0, 0}), Error);
}

TEST(Render, AutoIntervalAndDeterminism) {
  const auto field = bake_analytic(testing::sphere_box_scene(), 33);
  const Camera cam = testing::scene_camera(24);
  RenderConfig rc = testing::scene_render_config(64);
  RenderConfig resolved = rc;
  resolve_ray_interval({&field, nullptr}, cam, resolved);
  EXPECT_NEAR(resolved.near, 0.05 * field.domain().diagonal(), 1e-12);
  EXPECT_GT(resolved.far, distance(cam.origin(), Point3{0, 0, 0}));
  rc.workers = 1;
  const auto a = render_image({&field, nullptr}, cam, rc);
  rc.workers = 4;
  const auto b = render_image({&field, nullptr}, cam, rc);
  EXPECT_EQ(a.rgb, b.rgb);
  EXPECT_EQ(a.disparity, b.disparity);
  EXPECT_TRUE(std::isinf(psnr(a, b)));
  double coverage = 0.0;
  for (float o : a.opacity) coverage += o;
  EXPECT_GT(coverage, 10.0);
}

TEST(Render, ConfigValidation) {
  RenderConfig rc;
  rc.samples = 0;
  EXPECT_THROW(rc.validate(), InvalidArgument);
  rc.samples = 8;
  rc.near = 2.0;
  rc.far = 1.0;
  EXPECT_THROW(rc.validate(), InvalidArgument);
}

TEST(Images, EncodersAndQuantize) {
  EXPECT_EQ(quantize(-1.0), 0);
  EXPECT_EQ(quantize(0.5), 128);
  EXPECT_EQ(quantize(2.0), 255);
  const std::vector<std::uint8_t> px{255, 0, 0, 0, 255, 0};
  const auto ppm = encode_ppm(2, 1, px);
  EXPECT_EQ(ppm.substr(0, 11), "P6\n2 1\n255\n");
  EXPECT_EQ(ppm.size(), 11u + 6u);
  const auto png = encode_png(2, 1, px);
  EXPECT_EQ(png.substr(1, 3), "PNG");
  EXPECT_EQ(image_format_from_path("a/b.png"), ImageFormat::PNG);
  EXPECT_EQ(image_format_from_path("a/b.ppm"), ImageFormat::PPM);
}

TEST(Images, DisparityIsNormalized) {
  RenderOutput out;
  out.width = 2;
  out.height = 1;
  out.rgb.assign(6, 0.0f);
  out.opacity = {1.0f, 1.0f};
  out.disparity = {0.5f, 0.25f};
  const auto bytes = disparity_bytes(out);
  EXPECT_EQ(bytes[0], 255);
  EXPECT_EQ(bytes[3], 128);
}

TEST(Images, CentroidAndPsnr) {
  RenderOutput a;
  a.width = 4;
  a.height = 2;
  a.rgb.assign(24, 0.5f);
  a.opacity.assign(8, 0.0f);
  a.disparity.assign(8, 0.0f);
  a.opacity[a.width * 1 + 3] = 1.0f;
  const auto c = opacity_centroid(a);
  EXPECT_DOUBLE_EQ(c[0], 3.5);
  EXPECT_DOUBLE_EQ(c[1], 1.5);
  RenderOutput b = a;
  b.rgb[0] = 0.6f;
  EXPECT_NEAR(psnr(a, b), 10.0 * std::log10(24.0 / (0.1 * 0.1)), 1e-3);
}

}  // namespace
}  // namespace cagewarp
