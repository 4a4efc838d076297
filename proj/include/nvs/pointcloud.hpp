#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nvs/geometry.hpp"
#include "nvs/image.hpp"

namespace nvs {

// Dense per-pixel 3D points in the camera frame of an anchor view, with
// confidences and colors, as produced by dense stereo models.
struct PointMap {
  int width = 0;
  int height = 0;
  std::vector<Eigen::Vector3d> points;     // row-major H*W
  std::vector<double> confidence;          // finite, >= 0
  std::vector<std::array<float, 3>> colors;

  PointMap() = default;
  PointMap(int w, int h)
      : width(w),
        height(h),
        points(static_cast<size_t>(w) * h, Eigen::Vector3d::Zero()),
        confidence(static_cast<size_t>(w) * h, 0.0),
        colors(static_cast<size_t>(w) * h, {0.0f, 0.0f, 0.0f}) {}

  size_t index(int y, int x) const { return static_cast<size_t>(y) * width + x; }
};

struct ColoredPointCloud {
  std::vector<Eigen::Vector3d> positions;
  std::vector<std::array<float, 3>> colors;
  std::optional<std::vector<float>> confidences;

  size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
};

// Concatenates all pixels with confidence > conf_threshold, transformed into
// the world frame by each map's camera-to-world pose. Pixels with non-finite
// coordinates are dropped. Throws EmptyInput for an empty list.
ColoredPointCloud cloud_from_pointmaps(
    const std::vector<std::pair<PointMap, Pose>>& maps, double conf_threshold = 0.0);

// Unprojects the pixels where mask = 1 and appends them to the cloud; pixels
// where mask = 0 are never added. Pixels whose depth is non-finite or <= 0
// cannot be placed and are skipped. voxel_rho > 0 enables deduplication that
// keeps the first point per voxel (existing cloud points claim voxels first).
// Throws ShapeMismatch when frame/depth/mask disagree with k's dimensions.
ColoredPointCloud fuse_novel_view(const ColoredPointCloud& cloud, const Image& frame,
                                  const DepthMap& depth, const HoleMask& mask,
                                  const Pose& pose, const CameraIntrinsics& k,
                                  double voxel_rho = 0.0);

// Binary little-endian PLY: x,y,z float32; red,green,blue uchar; optional
// confidence float32. Positions are narrowed to float32 on write.
void write_ply(const std::string& path, const ColoredPointCloud& cloud);
ColoredPointCloud read_ply(const std::string& path);

}  // namespace nvs
