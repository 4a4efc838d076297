#include "nvs/metrics.hpp"

#include <cmath>
#include <unordered_map>

namespace nvs {
namespace {

void require_equal_lengths(const NormalizedTrajectory& a, const NormalizedTrajectory& b) {
  if (a.poses.size() != b.poses.size()) {
    throw Error::validation("LengthMismatch", "trajectories have different lengths");
  }
}

}  // namespace

NormalizedTrajectory normalize_trajectory(const Trajectory& traj) {
  if (traj.poses.empty()) {
    throw Error::validation("EmptyInput", "cannot normalize an empty trajectory");
  }
  NormalizedTrajectory out;
  const Pose first_inv = traj.poses.front().inverse();
  out.poses.reserve(traj.poses.size());
  double furthest = 0.0;
  for (const Pose& p : traj.poses) {
    Pose rel = first_inv.compose(p);
    furthest = std::max(furthest, rel.translation.norm());
    out.poses.push_back(rel);
  }
  if (furthest < 1e-12) {
    out.scale = 1.0;
    out.degenerate_scale = true;
  } else {
    out.scale = furthest;
    for (Pose& p : out.poses) p.translation /= furthest;
  }
  return out;
}

std::vector<double> per_frame_rotation_distance(const NormalizedTrajectory& gen,
                                                const NormalizedTrajectory& gt) {
  require_equal_lengths(gen, gt);
  std::vector<double> out;
  out.reserve(gen.poses.size());
  for (size_t i = 0; i < gen.poses.size(); ++i) {
    // Bit-identical rotations score exactly zero; acos of the trace form
    // amplifies last-bit noise near the identity into ~1e-8 otherwise.
    if (gen.poses[i].rotation == gt.poses[i].rotation) {
      out.push_back(0.0);
      continue;
    }
    const double c = ((gen.poses[i].rotation * gt.poses[i].rotation.transpose()).trace() - 1.0) / 2.0;
    out.push_back(std::acos(std::clamp(c, -1.0, 1.0)));
  }
  return out;
}

std::vector<double> per_frame_translation_distance(const NormalizedTrajectory& gen,
                                                   const NormalizedTrajectory& gt) {
  require_equal_lengths(gen, gt);
  std::vector<double> out;
  out.reserve(gen.poses.size());
  for (size_t i = 0; i < gen.poses.size(); ++i) {
    out.push_back((gt.poses[i].translation - gen.poses[i].translation).norm());
  }
  return out;
}

double rotation_distance(const NormalizedTrajectory& gen, const NormalizedTrajectory& gt) {
  double sum = 0.0;
  for (double d : per_frame_rotation_distance(gen, gt)) sum += d;
  return sum;
}

double translation_distance(const NormalizedTrajectory& gen, const NormalizedTrajectory& gt) {
  double sum = 0.0;
  for (double d : per_frame_translation_distance(gen, gt)) sum += d;
  return sum;
}

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) {
    throw Error::validation("ShapeMismatch", "PSNR inputs must share dimensions");
  }
  double sq = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    sq += d * d;
  }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sq / static_cast<double>(a.data.size());
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

struct CellKey {
  int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  size_t operator()(const CellKey& k) const {
    uint64_t h = 1469598103934665603ull;
    for (int64_t v : {k.x, k.y, k.z}) {
      h ^= static_cast<uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace

double surface_coverage(const ColoredPointCloud& cloud, const SyntheticScene& scene, int samples,
                        double eps, uint64_t seed) {
  const std::vector<Eigen::Vector3d> probes = sample_surface_points(scene, samples, seed);
  if (cloud.empty()) return 0.0;

  const double cell = eps > 0.0 ? eps : 1.0;
  std::unordered_map<CellKey, std::vector<uint32_t>, CellHash> grid;
  grid.reserve(cloud.size());
  auto key_of = [cell](const Eigen::Vector3d& p) {
    return CellKey{static_cast<int64_t>(std::floor(p.x() / cell)),
                   static_cast<int64_t>(std::floor(p.y() / cell)),
                   static_cast<int64_t>(std::floor(p.z() / cell))};
  };
  for (size_t i = 0; i < cloud.size(); ++i) {
    grid[key_of(cloud.positions[i])].push_back(static_cast<uint32_t>(i));
  }

  const double eps_sq = eps * eps;
  size_t covered = 0;
  for (const Eigen::Vector3d& probe : probes) {
    const CellKey base = key_of(probe);
    bool found = false;
    for (int64_t dz = -1; dz <= 1 && !found; ++dz) {
      for (int64_t dy = -1; dy <= 1 && !found; ++dy) {
        for (int64_t dx = -1; dx <= 1 && !found; ++dx) {
          const auto it = grid.find(CellKey{base.x + dx, base.y + dy, base.z + dz});
          if (it == grid.end()) continue;
          for (uint32_t idx : it->second) {
            if ((cloud.positions[idx] - probe).squaredNorm() <= eps_sq) {
              found = true;
              break;
            }
          }
        }
      }
    }
    covered += found;
  }
  return static_cast<double>(covered) / static_cast<double>(probes.size());
}

}  // namespace nvs
