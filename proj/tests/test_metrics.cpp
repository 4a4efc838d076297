#include <doctest.h>

#include "nvs/metrics.hpp"
#include "nvs/rng.hpp"

using namespace nvs;

namespace {

Pose random_pose(Rng& rng) {
  const Eigen::Vector3d axis =
      Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
  Pose pose;
  pose.rotation = Eigen::AngleAxisd(rng.uniform(0.0, M_PI), axis).toRotationMatrix();
  pose.translation = Eigen::Vector3d(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4));
  return pose;
}

Trajectory random_trajectory(Rng& rng, int frames) {
  Trajectory traj;
  traj.intrinsics = CameraIntrinsics(64.0, 64, 64);
  for (int i = 0; i < frames; ++i) traj.poses.push_back(random_pose(rng));
  return traj;
}

}  // namespace

TEST_CASE("a static trajectory normalizes to identities with the degenerate flag") {
  Rng rng(3);
  const Pose pose = random_pose(rng);
  Trajectory traj;
  traj.intrinsics = CameraIntrinsics(32.0, 32, 32);
  traj.poses.assign(5, pose);
  const NormalizedTrajectory norm = normalize_trajectory(traj);
  CHECK(norm.degenerate_scale);
  CHECK(norm.scale == 1.0);
  for (const Pose& p : norm.poses) {
    CHECK((p.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(p.translation.norm() < 1e-12);
  }
}

TEST_CASE("normalization divides by the furthest frame") {
  Trajectory traj;
  traj.intrinsics = CameraIntrinsics(32.0, 32, 32);
  traj.poses.push_back(Pose::identity());
  Pose second = Pose::identity();
  second.translation = {0.0, 0.0, 4.0};
  traj.poses.push_back(second);
  const NormalizedTrajectory norm = normalize_trajectory(traj);
  CHECK(norm.scale == doctest::Approx(4.0));
  CHECK((norm.poses[1].translation - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
  CHECK((norm.poses[0].translation).norm() == 0.0);
}

TEST_CASE("the furthest normalized frame has unit norm") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Trajectory traj = random_trajectory(rng, 2 + static_cast<int>(rng.uniform_index(20)));
    const NormalizedTrajectory norm = normalize_trajectory(traj);
    if (norm.degenerate_scale) continue;
    double furthest = 0.0;
    for (const Pose& p : norm.poses) furthest = std::max(furthest, p.translation.norm());
    CHECK(std::abs(furthest - 1.0) < 1e-9);
    CHECK((norm.poses[0].rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("rotation distance is zero for identical trajectories") {
  Rng rng(7);
  const Trajectory traj = random_trajectory(rng, 8);
  const NormalizedTrajectory a = normalize_trajectory(traj);
  const NormalizedTrajectory b = normalize_trajectory(traj);
  CHECK(rotation_distance(a, b) == 0.0);
  CHECK(translation_distance(a, b) == 0.0);
}

TEST_CASE("a single 90 degree z rotation scores pi/2") {
  NormalizedTrajectory gen;
  NormalizedTrajectory gt;
  Pose rotated;
  rotated.rotation = Eigen::AngleAxisd(M_PI / 2.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  gen.poses = {rotated};
  gt.poses = {Pose::identity()};
  CHECK(rotation_distance(gen, gt) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
}

TEST_CASE("rotation distance matches the quaternion oracle per frame") {
  Rng rng(9);
  NormalizedTrajectory gen;
  NormalizedTrajectory gt;
  for (int i = 0; i < 500; ++i) {
    gen.poses.push_back(random_pose(rng));
    gt.poses.push_back(random_pose(rng));
  }
  const std::vector<double> dist = per_frame_rotation_distance(gen, gt);
  for (size_t i = 0; i < dist.size(); ++i) {
    const Eigen::Quaterniond qa(gen.poses[i].rotation);
    const Eigen::Quaterniond qb(gt.poses[i].rotation);
    const double oracle = 2.0 * std::acos(std::min(1.0, std::abs(qa.dot(qb))));
    CHECK(std::abs(dist[i] - oracle) < 1e-9);
  }
}

TEST_CASE("translation distance matches direct summation") {
  Rng rng(11);
  NormalizedTrajectory gen;
  NormalizedTrajectory gt;
  for (int i = 0; i < 200; ++i) {
    gen.poses.push_back(random_pose(rng));
    gt.poses.push_back(random_pose(rng));
  }
  double expected = 0.0;
  for (int i = 0; i < 200; ++i) {
    expected += (gt.poses[i].translation - gen.poses[i].translation).norm();
  }
  CHECK(std::abs(translation_distance(gen, gt) - expected) < 1e-12);
}

TEST_CASE("a 3-4-0 offset at scale 5 contributes exactly one unit") {
  Trajectory gen;
  gen.intrinsics = CameraIntrinsics(32.0, 32, 32);
  gen.poses.push_back(Pose::identity());
  Pose offset = Pose::identity();
  offset.translation = {3.0, 4.0, 0.0};
  gen.poses.push_back(offset);

  Trajectory gt;
  gt.intrinsics = gen.intrinsics;
  gt.poses.push_back(Pose::identity());
  Pose far = Pose::identity();
  far.translation = {0.0, 0.0, 5.0};
  gt.poses.push_back(far);

  // gen normalizes by 5 = ||(3,4,0)||; the gt frame sits at unit distance in
  // another direction, so the per-frame distance is ||(0.6,0.8,0)-(0,0,1)||.
  const double d = translation_distance(normalize_trajectory(gen), normalize_trajectory(gt));
  const double expected = (Eigen::Vector3d(0.6, 0.8, 0.0) - Eigen::Vector3d(0, 0, 1)).norm();
  CHECK(d == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("distances are symmetric and reject length mismatches") {
  Rng rng(13);
  NormalizedTrajectory a;
  NormalizedTrajectory b;
  for (int i = 0; i < 12; ++i) {
    a.poses.push_back(random_pose(rng));
    b.poses.push_back(random_pose(rng));
  }
  CHECK(rotation_distance(a, b) == doctest::Approx(rotation_distance(b, a)).epsilon(1e-12));
  CHECK(translation_distance(a, b) == doctest::Approx(translation_distance(b, a)).epsilon(1e-12));

  NormalizedTrajectory shorter = a;
  shorter.poses.pop_back();
  try {
    rotation_distance(shorter, b);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == "LengthMismatch");
  }
  CHECK_THROWS_AS(translation_distance(shorter, b), Error);
}

TEST_CASE("distances are invariant to a global rigid transform") {
  Rng rng(15);
  const Trajectory gen = random_trajectory(rng, 10);
  const Trajectory gt = random_trajectory(rng, 10);
  const Pose global = random_pose(rng);

  Trajectory gen_moved = gen;
  Trajectory gt_moved = gt;
  for (Pose& p : gen_moved.poses) p = global.compose(p);
  for (Pose& p : gt_moved.poses) p = global.compose(p);

  const double r0 = rotation_distance(normalize_trajectory(gen), normalize_trajectory(gt));
  const double r1 =
      rotation_distance(normalize_trajectory(gen_moved), normalize_trajectory(gt_moved));
  CHECK(std::abs(r0 - r1) < 1e-9);
  const double t0 = translation_distance(normalize_trajectory(gen), normalize_trajectory(gt));
  const double t1 =
      translation_distance(normalize_trajectory(gen_moved), normalize_trajectory(gt_moved));
  CHECK(std::abs(t0 - t1) < 1e-9);
}

TEST_CASE("arccos clamping tolerates floating point dirt in rotations") {
  NormalizedTrajectory gen;
  NormalizedTrajectory gt;
  Pose dirty = Pose::identity();
  dirty.rotation(0, 0) = 1.0 + 5e-16;  // trace slightly above 3
  gen.poses = {dirty};
  gt.poses = {Pose::identity()};
  const double d = rotation_distance(gen, gt);
  CHECK(std::isfinite(d));
  CHECK(d == 0.0);
}

TEST_CASE("psnr matches the closed forms") {
  Image a(8, 6, 0.0f);
  Image b(8, 6, 0.5f);
  CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
  CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(1.0 / 0.25)).epsilon(1e-12));

  Rng rng(17);
  Image x(8, 6);
  Image y(8, 6);
  for (auto& v : x.data) v = static_cast<float>(rng.uniform());
  for (auto& v : y.data) v = static_cast<float>(rng.uniform());
  double mse = 0.0;
  for (size_t i = 0; i < x.data.size(); ++i) {
    const double d = static_cast<double>(x.data[i]) - static_cast<double>(y.data[i]);
    mse += d * d;
  }
  mse /= static_cast<double>(x.data.size());
  CHECK(std::abs(psnr(x, y) - 10.0 * std::log10(1.0 / mse)) < 1e-9);

  Image wrong(6, 8);
  CHECK_THROWS_AS(psnr(a, wrong), Error);
}

TEST_CASE("surface coverage of a dense self-sampling is nearly complete") {
  const SyntheticScene scene = make_synthetic_scene("occluder", 4000.0, 19);
  const double pitch = 1.0 / std::sqrt(4000.0);
  const double cov = surface_coverage(scene.cloud, scene, 5000, 2.0 * pitch, 3);
  CHECK(cov >= 0.99);
}

TEST_CASE("an empty cloud covers nothing") {
  const SyntheticScene scene = make_synthetic_scene("spheres", 500.0, 21);
  CHECK(surface_coverage({}, scene, 1000, 0.1, 3) == 0.0);
}

TEST_CASE("grid-accelerated coverage equals the brute-force scan") {
  const SyntheticScene scene = make_synthetic_scene("spheres", 300.0, 23);
  ColoredPointCloud partial;
  Rng rng(25);
  for (size_t i = 0; i < scene.cloud.size(); ++i) {
    if (rng.uniform() < 0.35) {
      partial.positions.push_back(scene.cloud.positions[i]);
      partial.colors.push_back(scene.cloud.colors[i]);
    }
  }
  const int samples = 2000;
  const double eps = 0.07;
  const uint64_t seed = 29;
  const double fast = surface_coverage(partial, scene, samples, eps, seed);

  const auto probes = sample_surface_points(scene, samples, seed);
  size_t covered = 0;
  for (const auto& probe : probes) {
    bool found = false;
    for (const auto& p : partial.positions) {
      if ((p - probe).squaredNorm() <= eps * eps) {
        found = true;
        break;
      }
    }
    covered += found;
  }
  CHECK(fast == static_cast<double>(covered) / samples);
}

TEST_CASE("coverage is monotone under cloud growth") {
  const SyntheticScene scene = make_synthetic_scene("occluder", 1000.0, 27);
  ColoredPointCloud half;
  for (size_t i = 0; i < scene.cloud.size(); i += 2) {
    half.positions.push_back(scene.cloud.positions[i]);
    half.colors.push_back(scene.cloud.colors[i]);
  }
  const double partial = surface_coverage(half, scene, 3000, 0.05, 31);
  const double full = surface_coverage(scene.cloud, scene, 3000, 0.05, 31);
  CHECK(full >= partial);
}
