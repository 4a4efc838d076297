#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvs/pointcloud.hpp"
#include "nvs/rng.hpp"

namespace nvs {

// Smooth procedural texture: per channel
//   c(p) = clamp01(base + amp * sin(2*pi * wave.p + phase)).
// Wave vectors are kept low-frequency so that colors vary slowly versus a
// pixel footprint; sampling the same surface twice then yields near-identical
// renders.
struct ColorField {
  std::array<double, 3> base{0.5, 0.5, 0.5};
  std::array<double, 3> amp{0.0, 0.0, 0.0};
  std::array<double, 3> phase{0.0, 0.0, 0.0};
  std::array<Eigen::Vector3d, 3> wave{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                      Eigen::Vector3d::Zero()};

  std::array<float, 3> color_at(const Eigen::Vector3d& p) const;
};

// Axis-aligned box (flat boxes act as one-sided rectangles) or sphere.
struct Primitive {
  enum class Kind { box, sphere };

  Kind kind = Kind::box;
  Eigen::Vector3d box_min = Eigen::Vector3d::Zero();
  Eigen::Vector3d box_max = Eigen::Vector3d::Zero();
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
  ColorField texture;

  static Primitive box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, ColorField tex);
  static Primitive sphere(const Eigen::Vector3d& c, double r, ColorField tex);

  double area() const;
  double surface_distance(const Eigen::Vector3d& p) const;
  // Smallest t > t_min with origin + t*dir on the surface.
  std::optional<double> ray_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                double t_min) const;
  Eigen::Vector3d sample_point(Rng& rng) const;
};

struct SceneRecipe {
  std::string name;       // box_room | occluder | spheres
  double density = 16000;  // surface samples per unit area
  uint64_t seed = 0;
  double scale = 1.0;
};

// Ground-truth world: an analytic surface list plus one deterministic
// sampling of it.
struct SyntheticScene {
  ColoredPointCloud cloud;
  std::vector<Primitive> surfaces;
  std::vector<int32_t> point_surface;  // primitive index per cloud point
  Pose reference_pose;

  double surface_distance(const Eigen::Vector3d& p) const;
};

SyntheticScene make_synthetic_scene(const SceneRecipe& recipe);
SyntheticScene make_synthetic_scene(const std::string& recipe_name, double density, uint64_t seed);

// Deterministic colored sampling of a primitive list at `density` points per
// unit area. Optionally reports the source primitive of each point.
ColoredPointCloud sample_primitives(const std::vector<Primitive>& prims, double density,
                                    uint64_t seed, std::vector<int32_t>* surface_idx = nullptr);

struct SceneRayHit {
  double depth = 0.0;  // camera-frame z of the hit
  int32_t primitive = -1;
};

// Casts the ray through pixel center (u, v); depth is camera z, matching the
// point renderer's depth convention.
std::optional<SceneRayHit> raycast_pixel(const SyntheticScene& scene, const Pose& pose,
                                         const CameraIntrinsics& k, double u, double v);

// Per-pixel analytic reconstruction of the reference view: camera-frame
// points, confidence 1 where a surface is hit (0 otherwise), surface colors.
PointMap pointmap_from_scene(const SyntheticScene& scene, const Pose& pose,
                             const CameraIntrinsics& k);

// Exact per-pixel render of the analytic surfaces (no splatting).
void render_scene_analytic(const SyntheticScene& scene, const Pose& pose,
                           const CameraIntrinsics& k, Image& rgb, DepthMap& depth,
                           HoleMask& mask);

// Deterministic area-weighted surface samples; used by coverage scoring.
std::vector<Eigen::Vector3d> sample_surface_points(const SyntheticScene& scene, int samples,
                                                   uint64_t seed);

}  // namespace nvs
