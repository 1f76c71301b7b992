// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/scene.hpp"

#include <cmath>
#include <json.hpp>

#include "cagewarp/io_util.hpp"

namespace cagewarp {

using nlohmann::json;

Aabb Primitive::bounds() const {
  if (shape == Shape::Box) return box;
  const Vec3 r{radius, radius, radius};
  return Aabb(center - r, center + r);
}

bool Primitive::contains(const Point3& p) const {
  if (shape == Shape::Box) return box.contains(p);
  return squared_norm(p - center) <= radius * radius;
}

void AnalyticSceneSpec::validate() const {
  if (domain.empty() || !(domain.extent().x > 0 && domain.extent().y > 0 && domain.extent().z > 0)) {
    throw InvalidArgument("scene domain must have positive extent");
  }
  if (sh_degree < 0 || sh_degree > 2) throw InvalidArgument("sh_degree must be 0, 1 or 2");
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const auto& p = primitives[i];
    const std::string where = "primitive " + std::to_string(i) + ": ";
    if (p.shape == Primitive::Shape::Sphere && !(p.radius > 0.0)) throw InvalidArgument(where + "radius must be positive");
    const Aabb b = p.bounds();
    if (!domain.contains(b.min) || !domain.contains(b.max)) throw InvalidArgument(where + "outside the field domain");
    if (!(p.density >= 0.0) || !std::isfinite(p.density)) throw InvalidArgument(where + "density must be >= 0");
    for (int c = 0; c < 3; ++c) {
      if (!(p.rgb[c] >= 0.0 && p.rgb[c] <= 1.0)) throw InvalidArgument(where + "rgb must lie in [0, 1]");
    }
    if (p.lobe && sh_degree < 1) throw InvalidArgument(where + "a color lobe needs sh_degree >= 1");
  }
}

RadianceSample AnalyticSceneSpec::evaluate(const Point3& p, const UnitDir3& d) const {
  for (auto it = primitives.rbegin(); it != primitives.rend(); ++it) {
    if (!it->contains(p)) continue;
    Vec3 rgb = it->rgb;
    if (it->lobe) rgb += Vec3{1, 1, 1} * (0.5 * it->lobe->amplitude * dot(d.vec(), it->lobe->axis.vec()));
    return {{std::clamp(rgb.x, 0.0, 1.0), std::clamp(rgb.y, 0.0, 1.0), std::clamp(rgb.z, 0.0, 1.0)}, it->density};
  }
  return {};
}

VoxelRadianceField bake_analytic(const AnalyticSceneSpec& spec, int res) { return bake_analytic(spec, {res, res, res}); }

VoxelRadianceField bake_analytic(const AnalyticSceneSpec& spec, std::array<int, 3> res) {
  spec.validate();
  VoxelRadianceField field(Lattice(res, spec.domain), spec.sh_degree);
  const auto& lat = field.lattice();
  for (std::size_t n = 0; n < lat.count(); ++n) {
    const Point3 p = lat.node(n);
    for (auto it = spec.primitives.rbegin(); it != spec.primitives.rend(); ++it) {
      if (!it->contains(p)) continue;
      field.density()[n] = static_cast<float>(it->density);
      for (int ch = 0; ch < 3; ++ch) {
        float* c = field.node_coeffs(n, ch);
        c[0] = static_cast<float>(it->rgb[ch] / kShC0);
        if (it->lobe) {
          // Y1-1 = -C1 y, Y10 = C1 z, Y11 = -C1 x.
          const double a = 0.5 * it->lobe->amplitude / kShC1;
          const Vec3& ax = it->lobe->axis.vec();
          c[1] = static_cast<float>(-a * ax.y);
          c[2] = static_cast<float>(a * ax.z);
          c[3] = static_cast<float>(-a * ax.x);
        }
      }
      break;
    }
  }
  return field;
}

namespace {

Vec3 vec_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ParseError(what + " must be an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ParseError(what + " must be an array of 3 numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

json vec_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

double number_from(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) throw ParseError(where + "missing numeric '" + key + "'");
  return obj[key].get<double>();
}

}  // namespace

AnalyticSceneSpec parse_scene(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scene JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("domain")) throw ParseError("scene needs a 'domain' object");
  AnalyticSceneSpec spec;
  const auto& dom = doc["domain"];
  if (!dom.is_object() || !dom.contains("min") || !dom.contains("max")) throw ParseError("domain needs 'min' and 'max'");
  const Vec3 lo = vec_from(dom["min"], "domain.min");
  const Vec3 hi = vec_from(dom["max"], "domain.max");
  if (lo.x >= hi.x || lo.y >= hi.y || lo.z >= hi.z) throw ParseError("domain.min must be below domain.max");
  spec.domain = Aabb(lo, hi);
  if (doc.contains("sh_degree")) {
    if (!doc["sh_degree"].is_number_integer()) throw ParseError("sh_degree must be an integer");
    spec.sh_degree = doc["sh_degree"].get<int>();
  }
  if (doc.contains("primitives")) {
    if (!doc["primitives"].is_array()) throw ParseError("'primitives' must be an array");
    std::size_t i = 0;
    for (const auto& pj : doc["primitives"]) {
      const std::string where = "primitive " + std::to_string(i++) + ": ";
      if (!pj.is_object() || !pj.contains("type") || !pj["type"].is_string()) throw ParseError(where + "missing 'type'");
      Primitive p;
      const auto type = pj["type"].get<std::string>();
      if (type == "sphere") {
        p.shape = Primitive::Shape::Sphere;
        if (!pj.contains("center")) throw ParseError(where + "missing 'center'");
        p.center = vec_from(pj["center"], where + "center");
        p.radius = number_from(pj, "radius", where);
      } else if (type == "box") {
        p.shape = Primitive::Shape::Box;
        if (!pj.contains("min") || !pj.contains("max")) throw ParseError(where + "box needs 'min' and 'max'");
        const Vec3 bmin = vec_from(pj["min"], where + "min");
        const Vec3 bmax = vec_from(pj["max"], where + "max");
        if (bmin.x > bmax.x || bmin.y > bmax.y || bmin.z > bmax.z) throw ParseError(where + "box min exceeds max");
        p.box = Aabb(bmin, bmax);
      } else {
        throw ParseError(where + "unknown type '" + type + "'");
      }
      p.density = number_from(pj, "density", where);
      if (!pj.contains("rgb")) throw ParseError(where + "missing 'rgb'");
      p.rgb = vec_from(pj["rgb"], where + "rgb");
      if (pj.contains("lobe")) {
        const auto& lj = pj["lobe"];
        if (!lj.is_object() || !lj.contains("axis")) throw ParseError(where + "lobe needs 'amplitude' and 'axis'");
        ColorLobe lobe;
        lobe.amplitude = number_from(lj, "amplitude", where + "lobe ");
        const Vec3 axis = vec_from(lj["axis"], where + "lobe.axis");
        if (!(norm(axis) > 0.0)) throw ParseError(where + "lobe axis must be non-zero");
        lobe.axis = UnitDir3::normalize(axis);
        p.lobe = lobe;
      }
      spec.primitives.push_back(p);
    }
  }
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return spec;
}

AnalyticSceneSpec load_scene(const std::filesystem::path& path) {
  try {
    return parse_scene(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_scene(const AnalyticSceneSpec& spec) {
  json doc;
  doc["domain"] = {{"min", vec_to(spec.domain.min)}, {"max", vec_to(spec.domain.max)}};
  doc["sh_degree"] = spec.sh_degree;
  doc["primitives"] = json::array();
  for (const auto& p : spec.primitives) {
    json pj;
    if (p.shape == Primitive::Shape::Sphere) {
      pj["type"] = "sphere";
      pj["center"] = vec_to(p.center);
      pj["radius"] = p.radius;
    } else {
      pj["type"] = "box";
      pj["min"] = vec_to(p.box.min);
      pj["max"] = vec_to(p.box.max);
    }
    pj["density"] = p.density;
    pj["rgb"] = vec_to(p.rgb);
    if (p.lobe) pj["lobe"] = {{"amplitude", p.lobe->amplitude}, {"axis", vec_to(p.lobe->axis.vec())}};
    doc["primitives"].push_back(pj);
  }
  return doc.dump(2) + "\n";
}

Vec3 Similarity::rotate(const Vec3& v) const {
  return {rotation[0][0] * v.x + rotation[0][1] * v.y + rotation[0][2] * v.z,
          rotation[1][0] * v.x + rotation[1][1] * v.y + rotation[1][2] * v.z,
          rotation[2][0] * v.x + rotation[2][1] * v.y + rotation[2][2] * v.z};
}

Point3 Similarity::apply(const Point3& p) const { return scale * rotate(p) + translation; }

Similarity Similarity::translate(const Vec3& t) {
  Similarity s;
  s.translation = t;
  return s;
}

Similarity Similarity::rotate_z90(int quarter_turns, const Point3& pivot) {
  Similarity s;
  for (int q = 0; q < ((quarter_turns % 4) + 4) % 4; ++q) {
    // Compose with [[0,-1,0],[1,0,0],[0,0,1]].
    auto r = s.rotation;
    for (int c = 0; c < 3; ++c) {
      s.rotation[0][c] = -r[1][c];
      s.rotation[1][c] = r[0][c];
    }
  }
  s.translation = pivot - s.rotate(pivot);
  return s;
}

Similarity Similarity::uniform_scale(double factor, const Point3& pivot) {
  if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  Similarity s;
  s.scale = factor;
  s.translation = pivot - factor * pivot;
  return s;
}

AnalyticSceneSpec transform_primitives(const AnalyticSceneSpec& spec, const Similarity& xf,
                                       const std::vector<std::size_t>& indices) {
  AnalyticSceneSpec out = spec;
  for (const std::size_t i : indices) {
    if (i >= out.primitives.size()) throw InvalidArgument("primitive index out of range");
    auto& p = out.primitives[i];
    if (p.shape == Primitive::Shape::Sphere) {
      p.center = xf.apply(p.center);
      p.radius *= xf.scale;
    } else {
      for (const auto& row : xf.rotation) {
        int nonzero = 0;
        for (double v : row) {
          if (v != 0.0) {
            if (std::abs(v) != 1.0) nonzero = 2;
            ++nonzero;
          }
        }
        if (nonzero != 1) throw InvalidArgument("boxes only support axis-permuting rotations");
      }
      const Point3 a = xf.apply(p.box.min);
      const Point3 b = xf.apply(p.box.max);
      p.box = Aabb(cwise_min(a, b), cwise_max(a, b));
    }
    if (p.lobe) p.lobe->axis = UnitDir3::normalize(xf.rotate(p.lobe->axis.vec()));
  }
  out.validate();
  return out;
}

}  // namespace cagewarp
