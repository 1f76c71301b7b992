// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "cagewarp/field.hpp"
#include "cagewarp/vec.hpp"

namespace cagewarp {

class Deformer;

// Cameras -----------------------------------------------------------------------------------

using Mat4 = std::array<std::array<double, 4>, 4>;

struct Ray {
  Point3 origin;
  UnitDir3 dir;
};

/// Pinhole camera; c2w maps camera space (looking down -z, y up, x right) to world space.
struct Camera {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  Mat4 c2w{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};

  /// Throws InvalidArgument for non-positive sizes or focal lengths or a rotation that is
  /// not orthonormal within `tolerance`.
  void validate(double tolerance = 1e-6) const;

  Point3 origin() const { return {c2w[0][3], c2w[1][3], c2w[2][3]}; }
  /// Ray through the center of pixel (i, j); j counts rows from the top.
  Ray pixel_ray(int i, int j) const;

  /// Square-pixel camera from a horizontal field of view.
  static Camera from_fov(int width, int height, double camera_angle_x, const Mat4& c2w);
};

/// Rays for every pixel, row-major from the top-left pixel.
std::vector<Ray> camera_rays(const Camera& camera);

/// c2w for a camera at `eye` looking at `target`.
Mat4 look_at(const Point3& eye, const Point3& target, const Vec3& up = {0, 0, 1});

/// `count` cameras evenly spaced on a circle around `target` at the given elevation
/// angle (radians) and distance.
std::vector<Camera> orbit_cameras(const Point3& target, double distance, double elevation, int count, int width,
                                  int height, double camera_angle_x);

/// Camera JSON: {"camera_angle_x": a, "frames": [{"transform_matrix": 4x4 row-major}]},
/// optionally with "w" and "h". Non-zero width/height arguments override the file.
/// Rotations must be orthonormal within 1e-4; they are re-orthonormalized on load.
std::vector<Camera> parse_cameras(const std::string& json_text, int width = 0, int height = 0);
std::vector<Camera> load_cameras(const std::filesystem::path& path, int width = 0, int height = 0);
std::string format_cameras(const std::vector<Camera>& cameras);
void save_cameras(const std::vector<Camera>& cameras, const std::filesystem::path& path);

// Volume rendering --------------------------------------------------------------------------

struct RenderConfig {
  int samples = 512;
  /// Ray interval; 0 picks near = 0.05 x scene diagonal and far = distance from the camera
  /// to the farthest corner of the scene bounds.
  double near = 0.0;
  double far = 0.0;
  Vec3 background{0, 0, 0};
  bool white_background = false;
  /// Rays stop once transmittance drops below this (0 disables).
  double transmittance_cutoff = 1e-4;
  unsigned workers = 0;  // 0 = default_worker_count()

  void validate() const;
  Vec3 background_color() const { return white_background ? Vec3{1, 1, 1} : background; }
};

struct RayResult {
  Vec3 rgb;
  double opacity = 0.0;
  double depth = 0.0;  // expected termination distance
  double disparity = 0.0;
  double weight_sum = 0.0;
  double transmittance = 1.0;
};

/// Emission-absorption quadrature with M midpoint samples t_i = near + (i + 0.5) delta.
/// `query(x, d)` returns a RadianceSample; non-finite values throw Error naming the sample.
template <class Query>
RayResult volume_render_ray(Query&& query, const Ray& ray, int samples, double near, double far,
                            const Vec3& background, double cutoff = 1e-4) {
  const double delta = (far - near) / samples;
  RayResult out;
  double transmittance = 1.0;
  double depth_acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = near + (i + 0.5) * delta;
    const Point3 x = ray.origin + t * ray.dir.vec();
    const RadianceSample s = query(x, ray.dir);
    if (!std::isfinite(s.sigma) || !is_finite(s.rgb) || s.sigma < 0.0) {
      throw Error("non-finite or negative radiance sample at (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                  ", " + std::to_string(x.z) + ")");
    }
    if (s.sigma == 0.0) continue;
    const double alpha = 1.0 - std::exp(-s.sigma * delta);
    const double w = transmittance * alpha;
    out.rgb += w * s.rgb;
    out.weight_sum += w;
    depth_acc += w * t;
    transmittance *= 1.0 - alpha;
    if (transmittance < cutoff) break;
  }
  out.transmittance = transmittance;
  out.opacity = 1.0 - transmittance;
  out.rgb += transmittance * background;
  out.depth = depth_acc / std::max(out.weight_sum, 1e-10);
  out.disparity = out.opacity < 1e-3 ? 0.0 : out.opacity / out.depth;
  return out;
}

struct RenderOutput {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;  // 3 per pixel, row-major from the top
  std::vector<float> disparity;
  std::vector<float> opacity;
};

/// What to render: the canonical field alone, or the field seen through a deformer.
struct SceneView {
  const VoxelRadianceField* field = nullptr;
  const Deformer* deformer = nullptr;

  /// Field domain united with both cages when deforming.
  Aabb bounds() const;
};

/// Resolve automatic near/far for one camera.
void resolve_ray_interval(const SceneView& scene, const Camera& camera, RenderConfig& config);

/// Renders every pixel; rows are distributed over workers and written by pixel index,
/// so the result does not depend on the worker count.
RenderOutput render_image(const SceneView& scene, const Camera& camera, const RenderConfig& config);

// Images ------------------------------------------------------------------------------------

enum class ImageFormat { PPM, PNG };
ImageFormat image_format_from_path(const std::filesystem::path& path);

/// 8-bit quantization floor(v * 255 + 0.5) of values clamped to [0, 1].
std::uint8_t quantize(double v);

std::string encode_ppm(int width, int height, const std::vector<std::uint8_t>& rgb);
std::string encode_png(int width, int height, const std::vector<std::uint8_t>& rgb);

std::vector<std::uint8_t> rgb_bytes(const RenderOutput& out);
/// Grayscale disparity normalized so the image maximum maps to white.
std::vector<std::uint8_t> disparity_bytes(const RenderOutput& out);

void write_image(const RenderOutput& out, const std::filesystem::path& path, ImageFormat format);
void write_disparity(const RenderOutput& out, const std::filesystem::path& path, ImageFormat format);

/// Peak signal-to-noise ratio of the RGB images in dB (infinity when identical).
double psnr(const RenderOutput& a, const RenderOutput& b);

/// Opacity-weighted image centroid (x, y) in pixels.
std::array<double, 2> opacity_centroid(const RenderOutput& out);

}  // namespace cagewarp
