#pragma once

// Independent test-side oracles, kept free of the implementation paths they
// check.

#include <cmath>

#include "nvs/renderer.hpp"

namespace nvs::testing {

// O(pixels x points) reference rasterizer: for each pixel, scan every point
// and keep the nearest one whose splat covers it, with the same 1e-12 depth
// tie rule (lowest index wins).
inline RenderOutput render_brute_force(const ColoredPointCloud& cloud, const Pose& pose,
                                       const CameraIntrinsics& k, int splat_radius_px) {
  struct Projected {
    int cx, cy;
    double depth;
    size_t index;
  };
  std::vector<Projected> projected;
  projected.reserve(cloud.size());
  for (size_t i = 0; i < cloud.size(); ++i) {
    const auto hit = project(cloud.positions[i], pose, k);
    if (!hit) continue;
    projected.push_back({static_cast<int>(std::lround(hit->u)),
                         static_cast<int>(std::lround(hit->v)), hit->depth, i});
  }

  RenderOutput out;
  out.rgb = Image(k.width, k.height, 0.0f);
  out.depth = DepthMap(k.width, k.height);
  out.mask = HoleMask(k.width, k.height, 1);
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      double best = std::numeric_limits<double>::infinity();
      int64_t winner = -1;
      for (const Projected& p : projected) {
        if (std::abs(p.cx - x) > splat_radius_px || std::abs(p.cy - y) > splat_radius_px) continue;
        if (best - p.depth >= kDepthTieEps) {
          best = p.depth;
          winner = static_cast<int64_t>(p.index);
        }
      }
      if (winner < 0) continue;
      const auto& c = cloud.colors[static_cast<size_t>(winner)];
      out.rgb.at(y, x, 0) = c[0];
      out.rgb.at(y, x, 1) = c[1];
      out.rgb.at(y, x, 2) = c[2];
      out.depth.at(y, x) = static_cast<float>(best);
      out.mask.at(y, x) = 0;
    }
  }
  return out;
}

inline bool render_outputs_identical(const RenderOutput& a, const RenderOutput& b) {
  return a.rgb == b.rgb && a.depth == b.depth && a.mask == b.mask;
}

}  // namespace nvs::testing
