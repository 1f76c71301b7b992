// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "cagewarp/parallel.hpp"
#include "cagewarp/render.hpp"
#include "cagewarp/warp.hpp"

namespace cagewarp {

void RenderConfig::validate() const {
  if (samples < 2) throw InvalidArgument("samples per ray must be at least 2");
  if (near != 0.0 || far != 0.0) {
    if (!(near > 0.0 && far > near)) throw InvalidArgument("need 0 < near < far");
  }
  if (!is_finite(background)) throw InvalidArgument("background must be finite");
}

Aabb SceneView::bounds() const {
  if (!field) throw InvalidArgument("scene has no field");
  Aabb b = field->domain();
  if (deformer) {
    b.extend(deformer->pair().deformed.bounds());
    b.extend(deformer->pair().canonical.bounds());
  }
  return b;
}

void resolve_ray_interval(const SceneView& scene, const Camera& camera, RenderConfig& config) {
  if (config.near != 0.0 || config.far != 0.0) return;
  const Aabb b = scene.bounds();
  config.near = 0.05 * b.diagonal();
  double far = 0.0;
  for (int c = 0; c < 8; ++c) {
    const Point3 corner{c & 1 ? b.max.x : b.min.x, c & 2 ? b.max.y : b.min.y, c & 4 ? b.max.z : b.min.z};
    far = std::max(far, distance(corner, camera.origin()));
  }
  config.far = std::max(far, 2.0 * config.near);
}

RenderOutput render_image(const SceneView& scene, const Camera& camera, const RenderConfig& cfg) {
  if (!scene.field) throw InvalidArgument("scene has no field");
  camera.validate();
  RenderConfig config = cfg;
  config.validate();
  resolve_ray_interval(scene, camera, config);

  RenderOutput out;
  out.width = camera.width;
  out.height = camera.height;
  const std::size_t pixels = std::size_t(camera.width) * camera.height;
  out.rgb.assign(3 * pixels, 0.0f);
  out.disparity.assign(pixels, 0.0f);
  out.opacity.assign(pixels, 0.0f);
  const Vec3 background = config.background_color();
  const VoxelRadianceField& field = *scene.field;
  const Deformer* deformer = scene.deformer;

  const auto render_row = [&](int j) {
    for (int i = 0; i < camera.width; ++i) {
      const Ray ray = camera.pixel_ray(i, j);
      RayResult r;
      if (deformer) {
        r = volume_render_ray([&](const Point3& x, const UnitDir3& d) { return deformer->query(field, x, d, true); },
                              ray, config.samples, config.near, config.far, background, config.transmittance_cutoff);
      } else {
        r = volume_render_ray(
            [&](const Point3& x, const UnitDir3& d) {
              return field.sample_density(x) == 0.0 ? RadianceSample{} : field.sample(x, d);
            },
            ray, config.samples, config.near, config.far, background, config.transmittance_cutoff);
      }
      const std::size_t p = std::size_t(j) * camera.width + i;
      for (int c = 0; c < 3; ++c) out.rgb[3 * p + c] = static_cast<float>(r.rgb[c]);
      out.disparity[p] = static_cast<float>(r.disparity);
      out.opacity[p] = static_cast<float>(r.opacity);
    }
  };
  const unsigned workers = config.workers ? config.workers : default_worker_count();
  parallel_for(std::size_t(camera.height), 1, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) render_row(static_cast<int>(j));
  });
  return out;
}

double psnr(const RenderOutput& a, const RenderOutput& b) {
  if (a.width != b.width || a.height != b.height) throw InvalidArgument("images differ in size");
  double se = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) {
    const double d = double(a.rgb[i]) - double(b.rgb[i]);
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / (se / a.rgb.size()));
}

std::array<double, 2> opacity_centroid(const RenderOutput& out) {
  double total = 0.0, sx = 0.0, sy = 0.0;
  for (int j = 0; j < out.height; ++j) {
    for (int i = 0; i < out.width; ++i) {
      const double w = out.opacity[std::size_t(j) * out.width + i];
      total += w;
      sx += w * (i + 0.5);
      sy += w * (j + 0.5);
    }
  }
  if (!(total > 0.0)) throw InvalidArgument("image is empty; centroid undefined");
  return {sx / total, sy / total};
}

}  // namespace cagewarp
