#include "nvs/renderer.hpp"

#include <cmath>

namespace nvs {

RenderOutput render(const ColoredPointCloud& cloud, const Pose& pose, const CameraIntrinsics& k,
                    int splat_radius_px) {
  const int w = k.width;
  const int h = k.height;
  std::vector<double> zbuf(static_cast<size_t>(w) * h, std::numeric_limits<double>::infinity());
  std::vector<int64_t> winner(static_cast<size_t>(w) * h, -1);

  const int r = splat_radius_px;
  for (size_t i = 0; i < cloud.size(); ++i) {
    const auto hit = project(cloud.positions[i], pose, k);
    if (!hit) continue;
    const int cx = static_cast<int>(std::lround(hit->u));
    const int cy = static_cast<int>(std::lround(hit->v));
    const int y0 = std::max(cy - r, 0);
    const int y1 = std::min(cy + r, h - 1);
    const int x0 = std::max(cx - r, 0);
    const int x1 = std::min(cx + r, w - 1);
    for (int py = y0; py <= y1; ++py) {
      for (int px = x0; px <= x1; ++px) {
        const size_t pix = static_cast<size_t>(py) * w + px;
        // Earlier (lower-index) points keep the pixel on a depth tie.
        if (zbuf[pix] - hit->depth >= kDepthTieEps) {
          zbuf[pix] = hit->depth;
          winner[pix] = static_cast<int64_t>(i);
        }
      }
    }
  }

  RenderOutput out;
  out.rgb = Image(w, h, 0.0f);
  out.depth = DepthMap(w, h);
  out.mask = HoleMask(w, h, 1);
  for (size_t pix = 0; pix < zbuf.size(); ++pix) {
    if (winner[pix] < 0) continue;
    const auto& c = cloud.colors[static_cast<size_t>(winner[pix])];
    out.rgb.data[pix * 3 + 0] = c[0];
    out.rgb.data[pix * 3 + 1] = c[1];
    out.rgb.data[pix * 3 + 2] = c[2];
    out.depth.data[pix] = static_cast<float>(zbuf[pix]);
    out.mask.values[pix] = 0;
  }
  return out;
}

std::vector<RenderOutput> render_trajectory(const ColoredPointCloud& cloud, const Trajectory& traj,
                                            int splat_radius_px) {
  if (traj.poses.empty()) {
    throw Error::validation("EmptyInput", "render_trajectory needs a non-empty trajectory");
  }
  std::vector<RenderOutput> out;
  out.reserve(traj.poses.size());
  for (const Pose& pose : traj.poses) {
    out.push_back(render(cloud, pose, traj.intrinsics, splat_radius_px));
  }
  return out;
}

double hole_ratio(const HoleMask& mask) {
  return static_cast<double>(mask.count_ones()) /
         (static_cast<double>(mask.width) * static_cast<double>(mask.height));
}

}  // namespace nvs
