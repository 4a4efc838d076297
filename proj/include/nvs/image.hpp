#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace nvs {

// Interleaved RGB image with channel values in [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> data;  // size = width * height * 3

  Image() = default;
  Image(int w, int h, float fill = 0.0f) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, fill) {}

  float& at(int y, int x, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  float at(int y, int x, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }

  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height;
  }
  bool operator==(const Image& other) const = default;
};

// Per-pixel depth in camera z; +inf marks pixels with no coverage.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  DepthMap() = default;
  DepthMap(int w, int h, float fill = std::numeric_limits<float>::infinity())
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  float& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
  float at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }

  bool operator==(const DepthMap& other) const = default;
};

// Binary grid; 1 marks occlusion and missing regions, 0 covered pixels.
struct HoleMask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> values;

  HoleMask() = default;
  HoleMask(int w, int h, uint8_t fill = 1) : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

  uint8_t& at(int y, int x) { return values[static_cast<size_t>(y) * width + x]; }
  uint8_t at(int y, int x) const { return values[static_cast<size_t>(y) * width + x]; }

  size_t count_ones() const {
    size_t n = 0;
    for (uint8_t v : values) n += v;
    return n;
  }

  bool operator==(const HoleMask& other) const = default;
};

}  // namespace nvs
