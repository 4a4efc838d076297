#pragma once

#include "nvs/geometry.hpp"
#include "nvs/image.hpp"
#include "nvs/scene.hpp"

namespace nvs {

// Trajectory expressed relative to its first frame, translations divided by
// the furthest frame's norm.
struct NormalizedTrajectory {
  std::vector<Pose> poses;
  double scale = 1.0;
  bool degenerate_scale = false;  // furthest frame < 1e-12; scale forced to 1
};

NormalizedTrajectory normalize_trajectory(const Trajectory& traj);

// Summed per-frame geodesic rotation distance (radians):
//   sum_i arccos(clamp((tr(R_gen R_gt^T) - 1) / 2, -1, 1)).
double rotation_distance(const NormalizedTrajectory& gen, const NormalizedTrajectory& gt);

// Summed per-frame translation distance: sum_i ||T_gt - T_gen||_2.
double translation_distance(const NormalizedTrajectory& gen, const NormalizedTrajectory& gt);

std::vector<double> per_frame_rotation_distance(const NormalizedTrajectory& gen,
                                                const NormalizedTrajectory& gt);
std::vector<double> per_frame_translation_distance(const NormalizedTrajectory& gen,
                                                   const NormalizedTrajectory& gt);

// 10*log10(1/MSE) over [0,1]-scaled channels; +inf for identical images.
double psnr(const Image& a, const Image& b);

// Fraction of `samples` surface points with a cloud point within eps.
// Spatial-grid accelerated; identical to a brute-force nearest-point scan.
double surface_coverage(const ColoredPointCloud& cloud, const SyntheticScene& scene, int samples,
                        double eps, uint64_t seed);

}  // namespace nvs
