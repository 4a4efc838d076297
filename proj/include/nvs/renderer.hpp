#pragma once

#include "nvs/pointcloud.hpp"

namespace nvs {

struct RenderOutput {
  Image rgb;       // black at uncovered pixels
  DepthMap depth;  // +inf at uncovered pixels
  HoleMask mask;   // 1 iff no splat covered the pixel
};

// Depth difference below this is a tie; the lowest point index wins.
inline constexpr double kDepthTieEps = 1e-12;

// Software z-buffer point-splat rasterizer. Each point projecting inside the
// image covers the square of pixels within Chebyshev distance splat_radius_px
// of its rounded projection; the nearest point owns each pixel.
RenderOutput render(const ColoredPointCloud& cloud, const Pose& pose, const CameraIntrinsics& k,
                    int splat_radius_px = 1);

std::vector<RenderOutput> render_trajectory(const ColoredPointCloud& cloud, const Trajectory& traj,
                                            int splat_radius_px = 1);

// sum(mask) / (W*H).
double hole_ratio(const HoleMask& mask);

}  // namespace nvs
