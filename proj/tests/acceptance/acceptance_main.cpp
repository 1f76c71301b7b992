// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cagewarp/cli.hpp"
#include "cagewarp/io_util.hpp"
#include "cagewarp/render.hpp"
#include "cagewarp/scene.hpp"
#include "cagewarp/warp.hpp"
#include "scenes.hpp"
#include "test_util.hpp"

namespace cagewarp::acceptance {
namespace {

namespace fs = std::filesystem;
using namespace cagewarp::testing;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    note((ok ? "" : "FAILED ") + what);
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
auto timed(double& secs, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  secs = seconds_since(t0);
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cagewarp_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::shared_ptr<const CoordGrid> grid_for(const CagePair& pair, CoordinateKind kind, int n) {
  return std::make_shared<const CoordGrid>(precompute_coord_grid(pair.deformed, kind, n));
}

DeformConfig config(CoordinateKind kind, int n, bool precise = false) {
  DeformConfig c;
  c.kind = kind;
  c.n = n;
  c.precise = precise;
  return c;
}

std::string kind_name(CoordinateKind k) { return std::string(to_string(k)); }

// 1. Identity deformation reproduces the canonical render.
Outcome identity_fidelity() {
  Outcome o;
  const auto field = bake_analytic(sphere_box_scene(), kSceneRes);
  const Camera cam = scene_camera(400);
  const RenderConfig rc = scene_render_config(256);
  double secs = 0.0;
  const RenderOutput canon = timed(secs, [&] { return render_image({&field, nullptr}, cam, rc); });
  o.note("canonical " + fmt("%.1fs", secs));
  const auto pair = std::make_shared<const CagePair>(CagePair::identity(sphere_cage()));
  for (auto kind : {CoordinateKind::MVC, CoordinateKind::HC, CoordinateKind::GC}) {
    const Deformer grid_def(pair, config(kind, 128), grid_for(*pair, kind, 128));
    const RenderOutput img = timed(secs, [&] { return render_image({&field, &grid_def}, cam, rc); });
    const double p = psnr(img, canon);
    o.require(p >= 40.0 && secs < 120.0, kind_name(kind) + " grid " + fmt("%.2f dB", p) + fmt(" %.1fs", secs));
    if (!has_closed_form(kind)) continue;
    const Deformer precise_def(pair, config(kind, 128, true), nullptr);
    const RenderOutput ref = timed(secs, [&] { return render_image({&field, &precise_def}, cam, rc); });
    const double q = psnr(ref, canon);
    o.require(q >= 60.0 && secs < 120.0, kind_name(kind) + " precise " + fmt("%.2f dB", q) + fmt(" %.1fs", secs));
  }
  return o;
}

// 2. Similarity deformations of the sphere cage match the re-baked transformed scene.
Outcome affine_oracle() {
  Outcome o;
  const auto spec = sphere_box_scene();
  const auto field = bake_analytic(spec, kSceneRes);
  const Camera cam = scene_camera(400);
  const RenderConfig rc = scene_render_config(256);
  struct Case {
    std::string name;
    Similarity xf;
    bool green;
  };
  const std::vector<Case> cases{{"translate", Similarity::translate({0.0, 0.5, 0.0}), true},
                                {"rotate", Similarity::rotate_z90(1, kSphereCenter), true},
                                {"scale", Similarity::uniform_scale(1.3, kSphereCenter), false}};
  for (const auto& c : cases) {
    const auto oracle_field = bake_analytic(transform_primitives(spec, c.xf, {0}), kSceneRes);
    const RenderOutput oracle = render_image({&oracle_field, nullptr}, cam, rc);
    const auto pair = std::make_shared<const CagePair>(apply_similarity(sphere_cage(), c.xf), sphere_cage());
    for (auto kind : {CoordinateKind::MVC, CoordinateKind::HC, CoordinateKind::GC}) {
      if (kind == CoordinateKind::GC && !c.green) continue;
      const Deformer def(pair, config(kind, 128), grid_for(*pair, kind, 128));
      const double p = psnr(render_image({&field, &def}, cam, rc), oracle);
      o.require(p >= 35.0, c.name + " " + kind_name(kind) + fmt(" %.2f dB", p));
    }
  }
  return o;
}

// Smooth non-affine perturbation, so the map is not reproduced exactly by interpolation.
TriMesh bent(TriMesh m) {
  for (auto& v : m.vertices) {
    v += 0.08 * Vec3{std::sin(3.0 * v.y + 1.0), std::cos(2.0 * v.z), std::sin(2.5 * v.x)};
  }
  return m;
}

// 3. Grid map error against the closed form, shrinking with n.
Outcome grid_vs_precise() {
  Outcome o;
  for (const auto& [cage_name, mesh] : {std::pair{"cube", unit_cube()}, std::pair{"l-shape", l_shape()}}) {
    const auto pair = std::make_shared<const CagePair>(mesh, bent(mesh));
    const double diag = pair->deformed.diagonal();
    const auto pts = interior_points(pair->deformed, 10000, 1e-3 * diag, 31);
    for (auto kind : {CoordinateKind::MVC, CoordinateKind::GC}) {
      const Deformer precise(pair, config(kind, 128, true), nullptr);
      std::vector<Point3> exact;
      exact.reserve(pts.size());
      for (const auto& x : pts) exact.push_back(precise.phi_x(x));
      std::vector<double> errs;
      for (int n : {32, 64, 128}) {
        const Deformer def(pair, config(kind, n), grid_for(*pair, kind, n));
        double sum = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) sum += distance(def.phi_x(pts[i]), exact[i]);
        errs.push_back(sum / double(pts.size()) / diag);
      }
      const bool ok = errs[2] <= 0.01 && errs[0] > errs[1] && errs[1] > errs[2];
      o.require(ok, std::string(cage_name) + " " + kind_name(kind) + " mean error/diag " + fmt("%.2e", errs[0]) + "," +
                        fmt("%.2e", errs[1]) + "," + fmt("%.2e", errs[2]));
    }
  }
  return o;
}

// 4. Precise-to-grid speedup and evaluation counters.
Outcome speedup() {
  Outcome o;
  AnalyticSceneSpec spec;
  spec.domain = Aabb({-1, -1, -1}, {1, 1, 1});
  spec.sh_degree = 0;
  Primitive ball;
  ball.center = {0, 0, 0};
  ball.radius = 0.5;
  ball.density = 1.5;  // translucent, so most samples along a ray stay inside the cage
  ball.rgb = {0.7, 0.4, 0.3};
  spec.primitives = {ball};
  const auto field = bake_analytic(spec, 65);
  const TriMesh canonical = make_icosphere_mesh({0, 0, 0}, 0.62, 1);
  TriMesh deformed = canonical;
  for (auto& v : deformed.vertices) {
    v.x *= 1.15;
    v.z += 0.15 * v.x;
  }
  o.require(canonical.vertices.size() >= 40 && canonical.vertices.size() <= 50,
            std::to_string(canonical.vertices.size()) + " cage vertices");
  const auto pair = std::make_shared<const CagePair>(deformed, canonical);
  const Mat4 pose = look_at({0.3, -2.6, 0.9}, {0, 0, 0});
  const Camera cam = Camera::from_fov(200, 200, 0.7, pose);
  const Camera small = Camera::from_fov(100, 100, 0.7, pose);
  RenderConfig rc;
  rc.samples = 128;

  const auto grid = grid_for(*pair, CoordinateKind::MVC, 128);
  const Deformer grid_def(pair, config(CoordinateKind::MVC, 128), grid);
  const Deformer precise_def(pair, config(CoordinateKind::MVC, 128, true), nullptr);
  render_image({&field, &grid_def}, cam, rc);  // warm-up
  std::vector<double> grid_times;
  for (int r = 0; r < 3; ++r) {
    double s = 0.0;
    timed(s, [&] { return render_image({&field, &grid_def}, cam, rc); });
    grid_times.push_back(s);
  }
  std::sort(grid_times.begin(), grid_times.end());
  double precise_secs = 0.0;
  timed(precise_secs, [&] { return render_image({&field, &precise_def}, cam, rc); });
  const double ratio = precise_secs / grid_times[1];
  o.require(ratio >= 10.0, fmt("precise %.2fs", precise_secs) + fmt(" grid %.3fs", grid_times[1]) + fmt(" ratio %.1fx", ratio));

  const auto total_grid_evals = [&](const Camera& c) {
    grid_def.reset_counters();
    render_image({&field, &grid_def}, c, rc);
    const auto k = grid_def.counters();
    return grid->evaluations + k.fallbacks + k.precise_evaluations;
  };
  const auto e200 = total_grid_evals(cam), e100 = total_grid_evals(small);
  o.require(e200 == e100, "grid evaluations " + std::to_string(e100) + " at 100^2, " + std::to_string(e200) + " at 200^2");
  const auto precise_evals = [&](const Camera& c) {
    precise_def.reset_counters();
    render_image({&field, &precise_def}, c, rc);
    return precise_def.counters().precise_evaluations;
  };
  const auto p200 = precise_evals(cam), p100 = precise_evals(small);
  o.require(p200 > 3 * p100, "precise evaluations " + std::to_string(p100) + " at 100^2, " + std::to_string(p200) + " at 200^2");

  bool hc_rejected = false;
  try {
    config(CoordinateKind::HC, 128, true).validate();
  } catch (const InvalidArgument&) {
    hc_rejected = true;
  }
  const fs::path dir = scratch_dir("bench");
  save_obj(canonical, dir / "canonical.obj");
  save_obj(deformed, dir / "deformed.obj");
  save_field(field, dir / "field.vrf");
  std::ostringstream out, err;
  const int rc_pre = cli::run({"precompute", "--cage-canonical", (dir / "canonical.obj").string(), "--cage-deformed",
                               (dir / "deformed.obj").string(), "--coords", "hc", "--precise", "--out",
                               (dir / "x.cwg").string()},
                              out, err);
  const int rc_bench = cli::run({"bench", "--field", (dir / "field.vrf").string(), "--cage-canonical",
                                 (dir / "canonical.obj").string(), "--cage-deformed", (dir / "deformed.obj").string(),
                                 "--grid-res", "16", "--image-size", "16", "--samples", "8", "--runs", "1", "--warmup", "0"},
                                out, err);
  const bool na_row = out.str().find("precise") != std::string::npos && out.str().find("N/A") != std::string::npos;
  o.require(hc_rejected && rc_pre == 2 && rc_bench == 0 && na_row, "hc precise reported N/A");
  return o;
}

// 5. Coordinate properties on a convex and a non-convex cage.
Outcome coordinate_properties() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Vec3 shift{0.37, -1.2, 2.5};
  double pou_mvc = 0.0, pou_hc = 0.0, lin = 0.0, gc_id = 0.0, resid = 0.0, trans = 0.0, trans_hc = 0.0;
  for (const TriMesh& mesh : {unit_cube(), l_shape()}) {
    const Cage cage(mesh);
    const Cage moved(translated(mesh, shift));
    const double diag = cage.diagonal();
    const auto pts = interior_points(cage, 1000, 1e-3 * diag, 5);
    const auto hc = precompute_coord_grid(cage, CoordinateKind::HC, 64);
    const auto hc_moved = precompute_coord_grid(moved, CoordinateKind::HC, 64);
    for (const auto& x : pts) {
      const auto w = mvc_weights(cage, x);
      pou_mvc = std::max(pou_mvc, std::abs(std::accumulate(w.vertex_weights.begin(), w.vertex_weights.end(), 0.0) - 1.0));
      lin = std::max(lin, distance(reconstruct(w, cage, CoordinateKind::MVC), x) / diag);
      const auto g = green_weights(cage, x);
      gc_id = std::max(gc_id, distance(reconstruct(g, cage, CoordinateKind::GC), x) / diag);
      const auto h = sample_weights(hc, x);
      if (!h) {
        o.require(false, "hc grid has no stencil at an interior point");
        return o;
      }
      pou_hc = std::max(pou_hc, std::abs(std::accumulate(h->vertex_weights.begin(), h->vertex_weights.end(), 0.0) - 1.0));

      const auto wm = mvc_weights(moved, x + shift);
      const auto gm = green_weights(moved, x + shift);
      const auto hm = sample_weights(hc_moved, x + shift);
      for (std::size_t j = 0; j < w.vertex_weights.size(); ++j) {
        trans = std::max({trans, std::abs(w.vertex_weights[j] - wm.vertex_weights[j]),
                          std::abs(g.vertex_weights[j] - gm.vertex_weights[j])});
        trans_hc = std::max(trans_hc, hm ? std::abs(h->vertex_weights[j] - hm->vertex_weights[j]) : 1.0);
      }
      for (std::size_t k = 0; k < g.face_weights.size(); ++k) {
        trans = std::max(trans, std::abs(g.face_weights[k] - gm.face_weights[k]));
      }
    }
    resid = std::max(resid, harmonic_residual(hc_grid_solve(cage, coord_lattice(cage.bounds(), 64))));
  }
  const double secs = seconds_since(t0);
  o.require(pou_mvc <= 1e-5, fmt("mvc sum-1 %.1e", pou_mvc));
  o.require(pou_hc <= 1e-3, fmt("hc grid sum-1 %.1e", pou_hc));
  o.require(lin <= 1e-6, fmt("mvc linear precision %.1e", lin));
  o.require(gc_id <= 1e-5, fmt("gc identity %.1e", gc_id));
  o.require(resid <= 1e-4, fmt("hc residual %.1e", resid));
  o.require(trans <= 1e-6, fmt("mvc/gc translation %.1e", trans));
  o.require(trans_hc <= 1e-6, fmt("hc grid translation %.1e", trans_hc));
  o.require(secs < 60.0, fmt("%.1fs", secs));
  return o;
}

VoxelRadianceField constant_field(const Aabb& domain, int res, double sigma, const Vec3& rgb) {
  VoxelRadianceField f(Lattice({res, res, res}, domain), 0);
  std::fill(f.density().begin(), f.density().end(), float(sigma));
  for (std::size_t n = 0; n < f.lattice().count(); ++n) {
    for (int c = 0; c < 3; ++c) f.node_coeffs(n, c)[0] = float(rgb[c] / kShC0);
  }
  return f;
}

// 6. Quadrature against the slab closed form, weight conservation and determinism.
Outcome quadrature() {
  Outcome o;
  const auto slab = [](double sigma) { return constant_field(Aabb({0, 0, 0}, {1, 1, 1}), 8, sigma, {0.5, 0.5, 0.5}); };
  double slab_err = 0.0;
  for (double sigma : {0.5, 2.0, 5.0}) {
    const auto f = slab(sigma);
    const Ray ray{{-1.0, 0.5, 0.5}, UnitDir3({1, 0, 0})};
    const auto query = [&](const Point3& x, const UnitDir3& d) { return f.sample(x, d); };
    // Sample interval covering the slab exactly, then one extending past both faces.
    for (auto [near, far] : {std::pair{1.0, 2.0}, std::pair{0.5, 2.5}}) {
      const auto r = volume_render_ray(query, ray, 512, near, far, {0, 0, 0}, 0.0);
      slab_err = std::max(slab_err, std::abs(r.opacity - (1.0 - std::exp(-sigma))));
    }
  }
  o.require(slab_err <= 1e-3, fmt("slab opacity error %.1e", slab_err));

  const auto field = bake_analytic(sphere_box_scene(), 65);
  const auto pair = std::make_shared<const CagePair>(translated(sphere_cage(), {0.0, 0.3, 0.1}), sphere_cage());
  const Deformer def(pair, config(CoordinateKind::MVC, 32), grid_for(*pair, CoordinateKind::MVC, 32));
  const Camera cam = scene_camera(64);
  RenderConfig rc = scene_render_config(512);
  double conservation = 0.0;
  for (const Deformer* d : {static_cast<const Deformer*>(nullptr), &def}) {
    RenderConfig local = rc;
    resolve_ray_interval({&field, d}, cam, local);
    for (const Ray& ray : camera_rays(cam)) {
      const auto query = [&](const Point3& x, const UnitDir3& dir) {
        return d ? d->query(field, x, dir) : field.sample(x, dir);
      };
      const auto r = volume_render_ray(query, ray, local.samples, local.near, local.far, {1, 1, 1}, local.transmittance_cutoff);
      conservation = std::max(conservation, std::abs(r.weight_sum + r.transmittance - 1.0));
    }
  }
  o.require(conservation <= 1e-6, fmt("max |sum w + T - 1| %.1e", conservation));

  bool identical = true;
  RenderOutput first;
  for (unsigned workers : {1u, 2u, 3u, 8u}) {
    rc.workers = workers;
    const RenderOutput img = render_image({&field, &def}, cam, rc);
    if (workers == 1) first = img;
    identical = identical && img.rgb == first.rgb && img.disparity == first.disparity && img.opacity == first.opacity;
  }
  o.require(identical, "bit-identical across 1/2/3/8 workers");
  return o;
}

// 7. Exactly one deformed-field branch per point.
Outcome case_partition() {
  Outcome o;
  const TriMesh cage = sphere_cage();
  struct Config {
    std::string name;
    TriMesh deformed;
  };
  const std::vector<Config> configs{{"disjoint", translated(cage, {0.9, 0.0, 0.0})},
                                    {"overlapping", translated(cage, {0.3, 0.2, 0.1})},
                                    {"nested", transformed(cage, {{{0.6, 0, 0}, {0, 0.6, 0}, {0, 0, 0.6}}}, {-0.1, 0.0, 0.0})}};
  for (const auto& c : configs) {
    const auto pair = std::make_shared<const CagePair>(c.deformed, cage);
    const Deformer def(pair, config(CoordinateKind::MVC, 32), grid_for(*pair, CoordinateKind::MVC, 32));
    Aabb box = pair->deformed.bounds();
    box.extend(pair->canonical.bounds());
    const double pad = 0.1 * box.diagonal();
    box = box.expanded({pad, pad, pad});
    const auto field = constant_field(box, 9, 3.0, {0.4, 0.6, 0.8});
    const Lattice probe({64, 64, 64}, box);
    const UnitDir3 dir = UnitDir3::normalize({0.3, -0.5, 0.8});
    std::size_t counts[3] = {0, 0, 0};
    std::size_t violations = 0;
    for (std::size_t n = 0; n < probe.count(); ++n) {
      const Point3 x = probe.node(n);
      const bool in_d = point_in_mesh(pair->deformed.mesh(), x);
      const bool in_c = point_in_mesh(pair->canonical.mesh(), x);
      const bool mapped = in_d, cleared = !in_d && in_c, unchanged = !in_d && !in_c;
      if (int(mapped) + int(cleared) + int(unchanged) != 1) ++violations;
      const Region expect = mapped ? Region::Mapped : cleared ? Region::Cleared : Region::Unchanged;
      if (def.classify(x) != expect) ++violations;
      ++counts[int(expect)];
      const RadianceSample s = def.query(field, x, dir);
      RadianceSample want;
      if (expect == Region::Unchanged) want = field.sample(x, dir);
      if (expect == Region::Mapped) want = field.sample(def.phi_x(x), def.phi_d(x, dir));
      if (!(s.sigma == want.sigma && s.rgb.x == want.rgb.x && s.rgb.y == want.rgb.y && s.rgb.z == want.rgb.z)) {
        ++violations;
      }
    }
    o.require(violations == 0 && counts[0] > 0 && counts[1] > 0 && counts[2] > 0,
              c.name + " unchanged/cleared/mapped " + std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + "/" +
                  std::to_string(counts[2]) + ", violations " + std::to_string(violations));
  }
  return o;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// 8. Animated translation moves the image centroid monotonically and linearly.
Outcome animation() {
  Outcome o;
  const fs::path dir = scratch_dir("animate");
  save_field(bake_analytic(sphere_box_scene(), kSceneRes), dir / "field.vrf");
  save_obj(sphere_cage(), dir / "canonical.obj");
  save_obj(translated(sphere_cage(), {0.0, 0.0, 0.35}), dir / "deformed.obj");
  save_cameras({scene_camera(128)}, dir / "cameras.json");
  const int frames = 8;
  std::ostringstream out, err;
  const int code = cli::run({"animate", "--field", (dir / "field.vrf").string(), "--cameras",
                             (dir / "cameras.json").string(), "--cage-canonical", (dir / "canonical.obj").string(),
                             "--cage-deformed", (dir / "deformed.obj").string(), "--coords", "mvc", "--grid-res", "48",
                             "--samples", "128", "--frames", std::to_string(frames), "--out", (dir / "frames").string()},
                            out, err);
  if (code != 0) {
    o.require(false, "animate exited " + std::to_string(code) + ": " + err.str());
    return o;
  }
  int images = 0;
  for (int i = 0; i < frames; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03d.png", i);
    images += fs::exists(dir / "frames" / name);
  }
  o.require(images == frames, std::to_string(images) + " frames written");
  const auto rows = read_csv(dir / "frames" / "frames.csv");
  if (rows.size() != std::size_t(frames) + 1) {
    o.require(false, "frames.csv has " + std::to_string(rows.size()) + " lines");
    return o;
  }
  std::vector<double> t, cx, cy;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    t.push_back(std::stod(rows[r][1]));
    cx.push_back(std::stod(rows[r][2]));
    cy.push_back(std::stod(rows[r][3]));
  }
  // Position along the overall direction of motion.
  const double dx = cx.back() - cx.front(), dy = cy.back() - cy.front();
  const double len = std::hypot(dx, dy);
  std::vector<double> s;
  for (std::size_t i = 0; i < t.size(); ++i) s.push_back(((cx[i] - cx[0]) * dx + (cy[i] - cy[0]) * dy) / len);
  bool monotone = len > 1.0;
  for (std::size_t i = 1; i < s.size(); ++i) monotone = monotone && s[i] > s[i - 1];
  const double mt = std::accumulate(t.begin(), t.end(), 0.0) / t.size();
  const double ms = std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  double stt = 0.0, sts = 0.0, sss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sts += (t[i] - mt) * (s[i] - ms);
    sss += (s[i] - ms) * (s[i] - ms);
  }
  const double r2 = sts * sts / (stt * sss);
  o.require(monotone, fmt("monotone, travel %.1f px", len));
  o.require(r2 >= 0.99, fmt("R^2 %.5f", r2));
  return o;
}

}  // namespace
}  // namespace cagewarp::acceptance

int main(int argc, char** argv) {
  using namespace cagewarp::acceptance;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity deformation fidelity", identity_fidelity},
      {"affine deformation oracle", affine_oracle},
      {"grid vs precise mapping error", grid_vs_precise},
      {"grid speedup and evaluation counters", speedup},
      {"coordinate properties", coordinate_properties},
      {"volume rendering quadrature", quadrature},
      {"deformed field case partition", case_partition},
      {"animation centroid", animation},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("criterion %d (%s): %s [%.1fs] %s\n", id, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
