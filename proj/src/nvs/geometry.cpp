#include "nvs/geometry.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "nvs/pointcloud.hpp"

namespace nvs {

void CameraIntrinsics::validate() const {
  if (!(focal_px > 0.0) || !std::isfinite(focal_px)) {
    throw Error::validation("InvalidIntrinsics", "focal_px must be positive");
  }
  if (width < 2 || height < 2) {
    throw Error::validation("InvalidIntrinsics", "width and height must be >= 2");
  }
  if (!std::isfinite(principal_x) || !std::isfinite(principal_y)) {
    throw Error::validation("InvalidIntrinsics", "principal point must be finite");
  }
}

double rotation_orthonormality_error(const Eigen::Matrix3d& r) {
  const Eigen::Matrix3d delta = r.transpose() * r - Eigen::Matrix3d::Identity();
  return delta.cwiseAbs().maxCoeff();
}

bool is_valid_rotation(const Eigen::Matrix3d& r, double tol) {
  return rotation_orthonormality_error(r) < tol && r.determinant() > 0.0;
}

std::optional<PixelHit> project(const Eigen::Vector3d& point, const Pose& pose,
                                const CameraIntrinsics& k) {
  const Eigen::Vector3d cam = pose.to_camera(point);
  if (!(cam.z() > kMinCameraZ)) return std::nullopt;
  PixelHit hit;
  hit.u = k.focal_px * cam.x() / cam.z() + k.principal_x;
  hit.v = k.focal_px * cam.y() / cam.z() + k.principal_y;
  hit.depth = cam.z();
  if (hit.u < 0.0 || hit.u >= k.width || hit.v < 0.0 || hit.v >= k.height) return std::nullopt;
  return hit;
}

Eigen::Vector3d unproject(double u, double v, double depth, const Pose& pose,
                          const CameraIntrinsics& k) {
  if (!(depth > 0.0)) {
    throw Error::validation("InvalidDepth", "unproject requires depth > 0");
  }
  const Eigen::Vector3d cam((u - k.principal_x) * depth / k.focal_px,
                            (v - k.principal_y) * depth / k.focal_px, depth);
  return pose.to_world(cam);
}

std::vector<Pose> interpolate_poses(const Pose& a, const Pose& b, int count) {
  if (count < 2) {
    throw Error::validation("InvalidCount", "interpolate_poses requires count >= 2");
  }
  Eigen::Quaterniond qa(a.rotation);
  Eigen::Quaterniond qb(b.rotation);
  if (qa.dot(qb) < 0.0) qb.coeffs() = -qb.coeffs();  // shortest arc

  std::vector<Pose> out;
  out.reserve(count);
  out.push_back(a);
  for (int i = 1; i + 1 < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    Pose p;
    p.rotation = qa.slerp(t, qb).normalized().toRotationMatrix();
    p.translation = (1.0 - t) * a.translation + t * b.translation;
    out.push_back(p);
  }
  out.push_back(b);
  return out;
}

double rotation_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double c = ((a.transpose() * b).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
             const Eigen::Vector3d& world_up) {
  const Eigen::Vector3d forward = (target - eye).normalized();
  const Eigen::Vector3d down = -world_up;
  Eigen::Vector3d y = down - down.dot(forward) * forward;
  if (y.norm() < 1e-9) {
    const Eigen::Vector3d fallback(1.0, 0.0, 0.0);
    y = fallback - fallback.dot(forward) * forward;
  }
  y.normalize();
  Pose pose;
  pose.rotation.col(0) = y.cross(forward);
  pose.rotation.col(1) = y;
  pose.rotation.col(2) = forward;
  pose.translation = eye;
  return pose;
}

namespace {

struct FocalTerm {
  double px, py;  // centered pixel coordinates (u', v')
  double qx, qy;  // (O_x, O_y) / O_z
  double conf;
};

std::vector<FocalTerm> collect_focal_terms(const PointMap& pm) {
  std::vector<FocalTerm> terms;
  terms.reserve(pm.points.size());
  for (int y = 0; y < pm.height; ++y) {
    for (int x = 0; x < pm.width; ++x) {
      const size_t i = pm.index(y, x);
      const double conf = pm.confidence[i];
      if (!(conf > 0.0)) continue;
      const Eigen::Vector3d& o = pm.points[i];
      if (!o.allFinite() || !(o.z() > kMinCameraZ)) continue;
      FocalTerm t;
      t.px = x - pm.width / 2.0;
      t.py = y - pm.height / 2.0;
      t.qx = o.x() / o.z();
      t.qy = o.y() / o.z();
      t.conf = conf;
      terms.push_back(t);
    }
  }
  return terms;
}

double objective_at(const std::vector<FocalTerm>& terms, double f) {
  double obj = 0.0;
  for (const FocalTerm& t : terms) {
    const double rx = t.px - f * t.qx;
    const double ry = t.py - f * t.qy;
    obj += t.conf * std::sqrt(rx * rx + ry * ry);
  }
  return obj;
}

}  // namespace

FocalEstimate estimate_focal_weiszfeld(const PointMap& pm, int max_iters, double tol) {
  const std::vector<FocalTerm> terms = collect_focal_terms(pm);
  if (terms.size() < 2) {
    throw Error::validation("DegeneratePointMap",
                            "focal estimation needs at least 2 usable pixels");
  }

  constexpr double kResidualFloor = 1e-12;
  FocalEstimate est;
  double f = std::max(pm.width, pm.height);
  est.objective_history.push_back(objective_at(terms, f));

  for (int iter = 0; iter < max_iters; ++iter) {
    double num = 0.0;
    double den = 0.0;
    for (const FocalTerm& t : terms) {
      const double rx = t.px - f * t.qx;
      const double ry = t.py - f * t.qy;
      const double w = t.conf / std::max(std::sqrt(rx * rx + ry * ry), kResidualFloor);
      num += w * (t.px * t.qx + t.py * t.qy);
      den += w * (t.qx * t.qx + t.qy * t.qy);
    }
    const double next = num / den;
    if (!std::isfinite(next)) {
      throw Error::internal("NumericalFailure", "focal iteration produced a non-finite value");
    }
    est.iterations = iter + 1;
    est.objective_history.push_back(objective_at(terms, next));
    const double step = std::abs(next - f);
    f = next;
    if (step < tol) break;
  }
  est.focal_px = f;
  return est;
}

double focal_objective(const PointMap& pm, double focal) {
  return objective_at(collect_focal_terms(pm), focal);
}

}  // namespace nvs
