#include "nvs/pointcloud.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace nvs {
namespace {

// Voxel key on a grid of pitch rho.
int64_t voxel_key(const Eigen::Vector3d& p, double rho) {
  const int64_t ix = static_cast<int64_t>(std::floor(p.x() / rho));
  const int64_t iy = static_cast<int64_t>(std::floor(p.y() / rho));
  const int64_t iz = static_cast<int64_t>(std::floor(p.z() / rho));
  // 21 bits per axis, offset to keep keys positive for any sane scene extent.
  const int64_t mask = (int64_t(1) << 21) - 1;
  return ((ix & mask) << 42) | ((iy & mask) << 21) | (iz & mask);
}

}  // namespace

ColoredPointCloud cloud_from_pointmaps(const std::vector<std::pair<PointMap, Pose>>& maps,
                                       double conf_threshold) {
  if (maps.empty()) {
    throw Error::validation("EmptyInput", "cloud_from_pointmaps needs at least one point map");
  }
  ColoredPointCloud cloud;
  cloud.confidences.emplace();
  for (const auto& [pm, pose] : maps) {
    for (int y = 0; y < pm.height; ++y) {
      for (int x = 0; x < pm.width; ++x) {
        const size_t i = pm.index(y, x);
        if (!(pm.confidence[i] > conf_threshold)) continue;
        const Eigen::Vector3d& p = pm.points[i];
        if (!p.allFinite()) continue;
        cloud.positions.push_back(pose.to_world(p));
        cloud.colors.push_back(pm.colors[i]);
        cloud.confidences->push_back(static_cast<float>(pm.confidence[i]));
      }
    }
  }
  return cloud;
}

ColoredPointCloud fuse_novel_view(const ColoredPointCloud& cloud, const Image& frame,
                                  const DepthMap& depth, const HoleMask& mask, const Pose& pose,
                                  const CameraIntrinsics& k, double voxel_rho) {
  if (frame.width != k.width || frame.height != k.height || depth.width != k.width ||
      depth.height != k.height || mask.width != k.width || mask.height != k.height) {
    throw Error::validation("ShapeMismatch", "frame/depth/mask must match the camera dimensions");
  }

  ColoredPointCloud out = cloud;
  std::unordered_set<int64_t> occupied;
  if (voxel_rho > 0.0) {
    occupied.reserve(cloud.size());
    for (const Eigen::Vector3d& p : cloud.positions) occupied.insert(voxel_key(p, voxel_rho));
  }

  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      if (!mask.at(y, x)) continue;
      const float d = depth.at(y, x);
      if (!std::isfinite(d) || !(d > 0.0f)) continue;  // hole with no completed depth
      const Eigen::Vector3d p = unproject(x, y, d, pose, k);
      if (voxel_rho > 0.0 && !occupied.insert(voxel_key(p, voxel_rho)).second) continue;
      out.positions.push_back(p);
      out.colors.push_back({frame.at(y, x, 0), frame.at(y, x, 1), frame.at(y, x, 2)});
      if (out.confidences) out.confidences->push_back(1.0f);
    }
  }
  return out;
}

void write_ply(const std::string& path, const ColoredPointCloud& cloud) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error::validation("IoFailure", "cannot write " + path);

  const bool with_conf = cloud.confidences.has_value();
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (with_conf) out << "property float confidence\n";
  out << "end_header\n";

  for (size_t i = 0; i < cloud.size(); ++i) {
    const float xyz[3] = {static_cast<float>(cloud.positions[i].x()),
                          static_cast<float>(cloud.positions[i].y()),
                          static_cast<float>(cloud.positions[i].z())};
    out.write(reinterpret_cast<const char*>(xyz), 12);
    uint8_t rgb[3];
    for (int c = 0; c < 3; ++c) {
      const float v = std::clamp(cloud.colors[i][c], 0.0f, 1.0f);
      rgb[c] = static_cast<uint8_t>(std::lround(v * 255.0f));
    }
    out.write(reinterpret_cast<const char*>(rgb), 3);
    if (with_conf) {
      const float conf = (*cloud.confidences)[i];
      out.write(reinterpret_cast<const char*>(&conf), 4);
    }
  }
  if (!out) throw Error::validation("IoFailure", "short write to " + path);
}

ColoredPointCloud read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::validation("IoFailure", "cannot open " + path);

  std::string line;
  size_t vertex_count = 0;
  std::vector<std::string> props;
  bool binary_le = false;
  if (!std::getline(in, line) || line != "ply") {
    throw Error::validation("InvalidPly", path + " is not a PLY file");
  }
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      binary_le = fmt == "binary_little_endian";
    } else if (word == "element") {
      std::string name;
      ls >> name >> vertex_count;
      if (name != "vertex") throw Error::validation("InvalidPly", "unsupported element " + name);
    } else if (word == "property") {
      std::string type, name;
      ls >> type >> name;
      props.push_back(name);
    } else if (word == "end_header") {
      break;
    } else if (word != "comment" && word != "ply") {
      throw Error::validation("InvalidPly", "unrecognized header line: " + line);
    }
  }
  if (!binary_le) throw Error::validation("InvalidPly", "only binary_little_endian PLY is supported");

  const std::vector<std::string> base = {"x", "y", "z", "red", "green", "blue"};
  bool with_conf = props.size() == 7 && props[6] == "confidence";
  if (!(props.size() == 6 || with_conf) ||
      !std::equal(base.begin(), base.end(), props.begin())) {
    throw Error::validation("InvalidPly", "unsupported property layout");
  }

  ColoredPointCloud cloud;
  cloud.positions.reserve(vertex_count);
  cloud.colors.reserve(vertex_count);
  if (with_conf) cloud.confidences.emplace();
  const size_t record = 15 + (with_conf ? 4 : 0);
  std::vector<char> buf(record);
  for (size_t i = 0; i < vertex_count; ++i) {
    if (!in.read(buf.data(), static_cast<std::streamsize>(record))) {
      throw Error::validation("InvalidPly", "truncated vertex data in " + path);
    }
    float xyz[3];
    std::memcpy(xyz, buf.data(), 12);
    cloud.positions.emplace_back(xyz[0], xyz[1], xyz[2]);
    const uint8_t* rgb = reinterpret_cast<const uint8_t*>(buf.data() + 12);
    cloud.colors.push_back({rgb[0] / 255.0f, rgb[1] / 255.0f, rgb[2] / 255.0f});
    if (with_conf) {
      float conf;
      std::memcpy(&conf, buf.data() + 15, 4);
      cloud.confidences->push_back(conf);
    }
  }
  return cloud;
}

}  // namespace nvs
