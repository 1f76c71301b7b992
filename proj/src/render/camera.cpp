// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "cagewarp/io_util.hpp"
#include "cagewarp/render.hpp"

namespace cagewarp {

using nlohmann::json;

namespace {

Vec3 column(const Mat4& m, int c) { return {m[0][c], m[1][c], m[2][c]}; }

double orthonormal_error(const Mat4& m) {
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      worst = std::max(worst, std::abs(dot(column(m, a), column(m, b)) - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

void Camera::validate(double tolerance) const {
  if (width <= 0 || height <= 0) throw InvalidArgument("camera image size must be positive");
  if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidArgument("camera focal lengths must be positive");
  for (const auto& row : c2w) {
    for (double v : row) {
      if (!std::isfinite(v)) throw InvalidArgument("camera pose has non-finite entries");
    }
  }
  if (orthonormal_error(c2w) > tolerance) throw InvalidArgument("camera rotation is not orthonormal");
  if (std::abs(dot(column(c2w, 0), cross(column(c2w, 1), column(c2w, 2))) - 1.0) > 1e-3) {
    throw InvalidArgument("camera rotation is a reflection");
  }
}

Ray Camera::pixel_ray(int i, int j) const {
  const Vec3 dc{(i + 0.5 - cx) / fx, -(j + 0.5 - cy) / fy, -1.0};
  const Vec3 dw = dc.x * column(c2w, 0) + dc.y * column(c2w, 1) + dc.z * column(c2w, 2);
  return {origin(), UnitDir3::normalize(dw)};
}

Camera Camera::from_fov(int width, int height, double camera_angle_x, const Mat4& c2w) {
  if (!(camera_angle_x > 0.0 && camera_angle_x < std::numbers::pi)) {
    throw InvalidArgument("camera_angle_x must lie in (0, pi)");
  }
  Camera c;
  c.width = width;
  c.height = height;
  c.fx = width / (2.0 * std::tan(0.5 * camera_angle_x));
  c.fy = c.fx;
  c.cx = width / 2.0;
  c.cy = height / 2.0;
  c.c2w = c2w;
  return c;
}

std::vector<Ray> camera_rays(const Camera& camera) {
  camera.validate();
  std::vector<Ray> rays;
  rays.reserve(std::size_t(camera.width) * camera.height);
  for (int j = 0; j < camera.height; ++j) {
    for (int i = 0; i < camera.width; ++i) rays.push_back(camera.pixel_ray(i, j));
  }
  return rays;
}

Mat4 look_at(const Point3& eye, const Point3& target, const Vec3& up) {
  const Vec3 back = UnitDir3::normalize(eye - target).vec();  // camera +z
  Vec3 right = cross(up, back);
  if (norm(right) < 1e-9) right = cross(Vec3{0, 1, 0}, back);
  right = UnitDir3::normalize(right).vec();
  const Vec3 cam_up = cross(back, right);
  Mat4 m{};
  for (int r = 0; r < 3; ++r) {
    m[r][0] = right[r];
    m[r][1] = cam_up[r];
    m[r][2] = back[r];
    m[r][3] = eye[r];
  }
  m[3] = {0, 0, 0, 1};
  return m;
}

std::vector<Camera> orbit_cameras(const Point3& target, double distance, double elevation, int count, int width,
                                  int height, double camera_angle_x) {
  if (count < 1) throw InvalidArgument("need at least one camera");
  std::vector<Camera> cams;
  for (int i = 0; i < count; ++i) {
    const double az = 2.0 * std::numbers::pi * i / count;
    const Point3 eye = target + distance * Vec3{std::cos(elevation) * std::cos(az), std::cos(elevation) * std::sin(az),
                                                std::sin(elevation)};
    cams.push_back(Camera::from_fov(width, height, camera_angle_x, look_at(eye, target)));
  }
  return cams;
}

namespace {

// Nearest rotation by iterated polar averaging; a no-op up to round-off for matrices
// that are already orthonormal.
void orthonormalize(Mat4& m) {
  double r[3][3];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) r[a][b] = m[a][b];
  }
  for (int it = 0; it < 8; ++it) {
    // R <- (R + R^-T) / 2, with R^-T = cofactor(R) / det(R).
    double cof[3][3];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const int a1 = (a + 1) % 3, a2 = (a + 2) % 3, b1 = (b + 1) % 3, b2 = (b + 2) % 3;
        cof[a][b] = r[a1][b1] * r[a2][b2] - r[a1][b2] * r[a2][b1];
      }
    }
    const double det = r[0][0] * cof[0][0] + r[0][1] * cof[0][1] + r[0][2] * cof[0][2];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) r[a][b] = 0.5 * (r[a][b] + cof[a][b] / det);
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) m[a][b] = r[a][b];
  }
}

}  // namespace

std::vector<Camera> parse_cameras(const std::string& json_text, int width, int height) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed camera JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("camera_angle_x") || !doc["camera_angle_x"].is_number()) {
    throw ParseError("camera file needs a numeric 'camera_angle_x'");
  }
  if (!doc.contains("frames") || !doc["frames"].is_array()) throw ParseError("camera file needs a 'frames' array");
  if (width <= 0) width = doc.contains("w") && doc["w"].is_number_integer() ? doc["w"].get<int>() : 0;
  if (height <= 0) height = doc.contains("h") && doc["h"].is_number_integer() ? doc["h"].get<int>() : 0;
  if (width <= 0 || height <= 0) throw ParseError("image size missing: give 'w' and 'h' in the file or on the command line");
  const double angle = doc["camera_angle_x"].get<double>();
  std::vector<Camera> cams;
  std::size_t index = 0;
  for (const auto& frame : doc["frames"]) {
    const std::string where = "frame " + std::to_string(index++) + ": ";
    if (!frame.is_object() || !frame.contains("transform_matrix")) throw ParseError(where + "missing 'transform_matrix'");
    const auto& tm = frame["transform_matrix"];
    if (!tm.is_array() || tm.size() != 4) throw ParseError(where + "transform_matrix must be 4x4");
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      if (!tm[r].is_array() || tm[r].size() != 4) throw ParseError(where + "transform_matrix must be 4x4");
      for (int c = 0; c < 4; ++c) {
        if (!tm[r][c].is_number()) throw ParseError(where + "transform_matrix entries must be numbers");
        m[r][c] = tm[r][c].get<double>();
      }
    }
    if (orthonormal_error(m) > 1e-4) throw ParseError(where + "rotation is not orthonormal (tolerance 1e-4)");
    orthonormalize(m);
    try {
      Camera cam = Camera::from_fov(width, height, angle, m);
      cam.validate();
      cams.push_back(cam);
    } catch (const InvalidArgument& e) {
      throw ParseError(where + e.what());
    }
  }
  if (cams.empty()) throw ParseError("camera file has no frames");
  return cams;
}

std::vector<Camera> load_cameras(const std::filesystem::path& path, int width, int height) {
  try {
    return parse_cameras(read_text_file(path), width, height);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_cameras(const std::vector<Camera>& cameras) {
  if (cameras.empty()) throw InvalidArgument("no cameras to save");
  const Camera& first = cameras.front();
  json doc;
  doc["camera_angle_x"] = 2.0 * std::atan(first.width / (2.0 * first.fx));
  doc["w"] = first.width;
  doc["h"] = first.height;
  doc["frames"] = json::array();
  for (const auto& cam : cameras) {
    if (cam.width != first.width || cam.height != first.height || cam.fx != first.fx) {
      throw InvalidArgument("camera files share one set of intrinsics");
    }
    json rows = json::array();
    for (const auto& row : cam.c2w) rows.push_back(json::array({row[0], row[1], row[2], row[3]}));
    doc["frames"].push_back({{"transform_matrix", rows}});
  }
  return doc.dump(2) + "\n";
}

void save_cameras(const std::vector<Camera>& cameras, const std::filesystem::path& path) {
  write_file_atomic(path, format_cameras(cameras));
}

}  // namespace cagewarp
