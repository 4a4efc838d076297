#include "nvs/scene.hpp"

#include <cmath>
#include <limits>

namespace nvs {

std::array<float, 3> ColorField::color_at(const Eigen::Vector3d& p) const {
  std::array<float, 3> c;
  for (int ch = 0; ch < 3; ++ch) {
    const double v = base[ch] + amp[ch] * std::sin(2.0 * M_PI * wave[ch].dot(p) + phase[ch]);
    c[ch] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return c;
}

Primitive Primitive::box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, ColorField tex) {
  Primitive prim;
  prim.kind = Kind::box;
  prim.box_min = lo;
  prim.box_max = hi;
  prim.texture = std::move(tex);
  return prim;
}

Primitive Primitive::sphere(const Eigen::Vector3d& c, double r, ColorField tex) {
  Primitive prim;
  prim.kind = Kind::sphere;
  prim.center = c;
  prim.radius = r;
  prim.texture = std::move(tex);
  return prim;
}

double Primitive::area() const {
  if (kind == Kind::sphere) return 4.0 * M_PI * radius * radius;
  const Eigen::Vector3d e = box_max - box_min;
  if (e.x() == 0.0) return e.y() * e.z();
  if (e.y() == 0.0) return e.x() * e.z();
  if (e.z() == 0.0) return e.x() * e.y();
  return 2.0 * (e.x() * e.y() + e.y() * e.z() + e.z() * e.x());
}

double Primitive::surface_distance(const Eigen::Vector3d& p) const {
  if (kind == Kind::sphere) return std::abs((p - center).norm() - radius);
  const Eigen::Vector3d c = 0.5 * (box_min + box_max);
  const Eigen::Vector3d h = 0.5 * (box_max - box_min);
  const Eigen::Vector3d q = (p - c).cwiseAbs() - h;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return std::abs(outside + inside);
}

std::optional<double> Primitive::ray_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                         double t_min) const {
  if (kind == Kind::sphere) {
    const Eigen::Vector3d oc = origin - center;
    const double a = dir.squaredNorm();
    const double b = 2.0 * oc.dot(dir);
    const double c = oc.squaredNorm() - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t0 = (-b - sq) / (2.0 * a);
    const double t1 = (-b + sq) / (2.0 * a);
    if (t0 > t_min) return t0;
    if (t1 > t_min) return t1;
    return std::nullopt;
  }

  // Slab test; zero-thickness slabs fall out of the interval arithmetic.
  double lo = t_min;
  double hi = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double o = origin[axis];
    const double d = dir[axis];
    if (d == 0.0) {
      if (o < box_min[axis] || o > box_max[axis]) return std::nullopt;
      continue;
    }
    double t0 = (box_min[axis] - o) / d;
    double t1 = (box_max[axis] - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (lo > hi) return std::nullopt;
  }
  if (lo > t_min) return lo;
  if (hi > t_min) return hi;  // origin inside the box
  return std::nullopt;
}

Eigen::Vector3d Primitive::sample_point(Rng& rng) const {
  if (kind == Kind::sphere) {
    Eigen::Vector3d dir(rng.normal(), rng.normal(), rng.normal());
    double n = dir.norm();
    while (n < 1e-12) {
      dir = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      n = dir.norm();
    }
    return center + radius * (dir / n);
  }

  const Eigen::Vector3d e = box_max - box_min;
  // Flat box: sample the single rectangle.
  if (e.x() == 0.0 || e.y() == 0.0 || e.z() == 0.0) {
    return box_min + Eigen::Vector3d(e.x() * rng.uniform(), e.y() * rng.uniform(),
                                     e.z() * rng.uniform());
  }
  // Solid box: pick a face pair weighted by area, then a side.
  const double axy = e.x() * e.y();
  const double ayz = e.y() * e.z();
  const double azx = e.z() * e.x();
  const double pick = rng.uniform() * (axy + ayz + azx);
  int flat_axis = pick < axy ? 2 : (pick < axy + ayz ? 0 : 1);
  const bool far_side = rng.uniform() < 0.5;
  Eigen::Vector3d p = box_min + Eigen::Vector3d(e.x() * rng.uniform(), e.y() * rng.uniform(),
                                                e.z() * rng.uniform());
  p[flat_axis] = far_side ? box_max[flat_axis] : box_min[flat_axis];
  return p;
}

double SyntheticScene::surface_distance(const Eigen::Vector3d& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Primitive& prim : surfaces) best = std::min(best, prim.surface_distance(p));
  return best;
}

namespace {

ColorField make_texture(int index) {
  static const double bases[6][3] = {
      {0.55, 0.40, 0.35}, {0.35, 0.55, 0.45}, {0.40, 0.40, 0.60},
      {0.60, 0.55, 0.35}, {0.45, 0.35, 0.55}, {0.50, 0.50, 0.40},
  };
  ColorField tex;
  const double* base = bases[index % 6];
  for (int ch = 0; ch < 3; ++ch) {
    tex.base[ch] = base[ch];
    tex.amp[ch] = 0.10;
    tex.phase[ch] = 0.7 * index + 2.1 * ch;
    // Kept very low-frequency: the color drift across one splat footprint
    // must stay below an 8-bit step so resampled renders agree pixelwise.
    const double fx = 0.012 + 0.004 * ((index + ch) % 3);
    const double fy = 0.014 + 0.003 * ((index + 2 * ch) % 3);
    const double fz = 0.013 + 0.004 * ((index + ch) % 2);
    tex.wave[ch] = Eigen::Vector3d(fx, fy, fz);
  }
  return tex;
}

std::vector<Primitive> recipe_surfaces(const SceneRecipe& recipe) {
  const double s = recipe.scale;
  using V = Eigen::Vector3d;
  std::vector<Primitive> prims;
  if (recipe.name == "box_room") {
    // Interior of a box, camera at the origin looking +z; the z = -2 face is
    // left open behind the camera.
    const double hx = 2.0 * s, hy = 1.5 * s, hz = 2.0 * s;
    prims.push_back(Primitive::box(V(-hx, -hy, hz), V(hx, hy, hz), make_texture(0)));    // back
    prims.push_back(Primitive::box(V(-hx, -hy, -hz), V(-hx, hy, hz), make_texture(1)));  // left
    prims.push_back(Primitive::box(V(hx, -hy, -hz), V(hx, hy, hz), make_texture(2)));    // right
    prims.push_back(Primitive::box(V(-hx, hy, -hz), V(hx, hy, hz), make_texture(3)));    // floor (+y is down)
    prims.push_back(Primitive::box(V(-hx, -hy, -hz), V(hx, -hy, hz), make_texture(4)));  // ceiling
  } else if (recipe.name == "occluder") {
    // A near plane partially hiding a far plane, seen frontally from the
    // origin; the hidden band is only revealed by moving the camera.
    prims.push_back(Primitive::box(V(-3.0 * s, -2.25 * s, 4.0 * s), V(3.0 * s, 2.25 * s, 4.0 * s),
                                   make_texture(0)));
    prims.push_back(Primitive::box(V(-1.4 * s, -0.9 * s, 2.0 * s), V(-0.1 * s, 0.9 * s, 2.0 * s),
                                   make_texture(1)));
  } else if (recipe.name == "spheres") {
    prims.push_back(Primitive::box(V(-4.0 * s, 1.0 * s, 0.0), V(4.0 * s, 1.0 * s, 8.0 * s),
                                   make_texture(0)));  // ground at y = +1 (down)
    prims.push_back(Primitive::sphere(V(-1.2 * s, 0.5 * s, 3.5 * s), 0.5 * s, make_texture(1)));
    prims.push_back(Primitive::sphere(V(0.9 * s, 0.7 * s, 4.5 * s), 0.3 * s, make_texture(2)));
    prims.push_back(Primitive::sphere(V(0.0 * s, 0.6 * s, 2.6 * s), 0.4 * s, make_texture(3)));
  } else {
    throw Error::validation("UnknownRecipe", "unknown scene recipe: " + recipe.name);
  }
  return prims;
}

}  // namespace

ColoredPointCloud sample_primitives(const std::vector<Primitive>& prims, double density,
                                    uint64_t seed, std::vector<int32_t>* surface_idx) {
  if (!(density > 0.0)) {
    throw Error::validation("InvalidDensity", "density must be > 0");
  }
  ColoredPointCloud cloud;
  Rng rng(seed);
  for (size_t i = 0; i < prims.size(); ++i) {
    const Primitive& prim = prims[i];
    const auto n = static_cast<size_t>(std::llround(density * prim.area()));
    for (size_t j = 0; j < std::max<size_t>(n, 1); ++j) {
      const Eigen::Vector3d p = prim.sample_point(rng);
      cloud.positions.push_back(p);
      cloud.colors.push_back(prim.texture.color_at(p));
      if (surface_idx) surface_idx->push_back(static_cast<int32_t>(i));
    }
  }
  return cloud;
}

SyntheticScene make_synthetic_scene(const SceneRecipe& recipe) {
  SyntheticScene scene;
  scene.surfaces = recipe_surfaces(recipe);
  scene.reference_pose = Pose::identity();
  scene.cloud = sample_primitives(scene.surfaces, recipe.density, recipe.seed, &scene.point_surface);
  return scene;
}

SyntheticScene make_synthetic_scene(const std::string& recipe_name, double density, uint64_t seed) {
  SceneRecipe recipe;
  recipe.name = recipe_name;
  recipe.density = density;
  recipe.seed = seed;
  return make_synthetic_scene(recipe);
}

std::optional<SceneRayHit> raycast_pixel(const SyntheticScene& scene, const Pose& pose,
                                         const CameraIntrinsics& k, double u, double v) {
  const Eigen::Vector3d dir_cam((u - k.principal_x) / k.focal_px,
                                (v - k.principal_y) / k.focal_px, 1.0);
  const Eigen::Vector3d dir = pose.rotation * dir_cam;  // |dir_cam.z| = 1 so t == camera z
  std::optional<SceneRayHit> best;
  for (size_t i = 0; i < scene.surfaces.size(); ++i) {
    const auto t = scene.surfaces[i].ray_hit(pose.translation, dir, kMinCameraZ);
    if (t && (!best || *t < best->depth)) {
      best = SceneRayHit{*t, static_cast<int32_t>(i)};
    }
  }
  return best;
}

PointMap pointmap_from_scene(const SyntheticScene& scene, const Pose& pose,
                             const CameraIntrinsics& k) {
  PointMap pm(k.width, k.height);
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      const auto hit = raycast_pixel(scene, pose, k, x, y);
      const size_t i = pm.index(y, x);
      if (!hit) continue;
      const double d = hit->depth;
      const Eigen::Vector3d cam((x - k.principal_x) * d / k.focal_px,
                                (y - k.principal_y) * d / k.focal_px, d);
      pm.points[i] = cam;
      pm.confidence[i] = 1.0;
      pm.colors[i] = scene.surfaces[hit->primitive].texture.color_at(pose.to_world(cam));
    }
  }
  return pm;
}

void render_scene_analytic(const SyntheticScene& scene, const Pose& pose,
                           const CameraIntrinsics& k, Image& rgb, DepthMap& depth,
                           HoleMask& mask) {
  rgb = Image(k.width, k.height, 0.0f);
  depth = DepthMap(k.width, k.height);
  mask = HoleMask(k.width, k.height, 1);
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      const auto hit = raycast_pixel(scene, pose, k, x, y);
      if (!hit) continue;
      const Eigen::Vector3d world = unproject(x, y, hit->depth, pose, k);
      const auto c = scene.surfaces[hit->primitive].texture.color_at(world);
      for (int ch = 0; ch < 3; ++ch) rgb.at(y, x, ch) = c[ch];
      depth.at(y, x) = static_cast<float>(hit->depth);
      mask.at(y, x) = 0;
    }
  }
}

std::vector<Eigen::Vector3d> sample_surface_points(const SyntheticScene& scene, int samples,
                                                   uint64_t seed) {
  if (samples < 1) throw Error::validation("InvalidSampleCount", "samples must be >= 1");
  double total_area = 0.0;
  for (const Primitive& prim : scene.surfaces) total_area += prim.area();

  std::vector<Eigen::Vector3d> out;
  out.reserve(samples);
  Rng rng(seed);
  for (size_t i = 0; i < scene.surfaces.size(); ++i) {
    const Primitive& prim = scene.surfaces[i];
    size_t n = static_cast<size_t>(std::llround(samples * prim.area() / total_area));
    if (i + 1 == scene.surfaces.size()) {  // exact total
      n = out.size() < static_cast<size_t>(samples) ? samples - out.size() : 0;
    }
    for (size_t j = 0; j < n && out.size() < static_cast<size_t>(samples); ++j) {
      out.push_back(prim.sample_point(rng));
    }
  }
  while (out.size() < static_cast<size_t>(samples)) {
    out.push_back(scene.surfaces.back().sample_point(rng));
  }
  return out;
}

}  // namespace nvs
