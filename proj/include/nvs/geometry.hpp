#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "nvs/error.hpp"

namespace nvs {

struct PointMap;

// Pinhole camera. Square pixels, no distortion. The two-argument form places
// the principal point at the image center.
struct CameraIntrinsics {
  double focal_px = 1.0;
  double principal_x = 0.0;
  double principal_y = 0.0;
  int width = 2;
  int height = 2;

  CameraIntrinsics() = default;
  CameraIntrinsics(double focal, int w, int h)
      : focal_px(focal), principal_x(w / 2.0), principal_y(h / 2.0), width(w), height(h) {}
  CameraIntrinsics(double focal, double cx, double cy, int w, int h)
      : focal_px(focal), principal_x(cx), principal_y(cy), width(w), height(h) {}

  void validate() const;
};

// Rigid camera pose, stored camera-to-world. Coordinates are right-handed
// with the camera looking down +z, x right, y down.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return Pose{}; }

  Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const {
    return rotation.transpose() * (world - translation);
  }
  Eigen::Vector3d to_world(const Eigen::Vector3d& cam) const {
    return rotation * cam + translation;
  }

  Pose inverse() const {
    Pose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(rotation.transpose() * translation);
    return inv;
  }

  // this ∘ other: apply `other` first, then `this`.
  Pose compose(const Pose& other) const {
    Pose out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
  }
};

// Max-norm deviation of R^T R from identity; used by validation and tests.
double rotation_orthonormality_error(const Eigen::Matrix3d& r);
bool is_valid_rotation(const Eigen::Matrix3d& r, double tol = 1e-9);

struct Trajectory {
  std::vector<Pose> poses;
  CameraIntrinsics intrinsics;
};

struct PixelHit {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

inline constexpr double kMinCameraZ = 1e-9;

// Projects a world point through the pinhole model. Returns nullopt when the
// point is behind the camera (z <= kMinCameraZ) or lands outside
// [0,width) x [0,height).
std::optional<PixelHit> project(const Eigen::Vector3d& point, const Pose& pose,
                                const CameraIntrinsics& k);

// Exact right-inverse of project. Throws InvalidDepth for depth <= 0.
Eigen::Vector3d unproject(double u, double v, double depth, const Pose& pose,
                          const CameraIntrinsics& k);

// `count` poses from a to b inclusive. Rotation follows the geodesic
// (quaternion slerp, shortest arc); translation is linear in t = i/(count-1).
// Endpoints are the inputs themselves. Throws InvalidCount for count < 2.
std::vector<Pose> interpolate_poses(const Pose& a, const Pose& b, int count);

// Geodesic angle (radians) between two rotations.
double rotation_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

// Camera-to-world pose at `eye` with +z toward `target`, stabilized so that
// camera y aligns with world +y (down). Falls back to the world x axis when
// the view direction is vertical.
Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
             const Eigen::Vector3d& world_up = Eigen::Vector3d(0.0, -1.0, 0.0));

struct FocalEstimate {
  double focal_px = 0.0;
  int iterations = 0;
  // Objective value after each update, starting with the initial guess.
  std::vector<double> objective_history;
};

// Robust focal recovery from a point map: minimizes
//   sum_i D_i * || (u'_i, v'_i) - f * (O_x, O_y)/O_z ||
// over f via the smoothed IRLS form of the Weiszfeld iteration. Pixels with
// zero confidence, non-finite coordinates, or z <= kMinCameraZ are excluded.
// Initialization f0 = max(width, height); stops when |f_{k+1} - f_k| < tol.
FocalEstimate estimate_focal_weiszfeld(const PointMap& pm, int max_iters = 10,
                                       double tol = 1e-6);

// The Weiszfeld objective at a given focal; exposed for oracle comparisons.
double focal_objective(const PointMap& pm, double focal);

}  // namespace nvs
