#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nvs/error.hpp"
#include "nvs/image.hpp"

namespace nvs {

// Minimal PNG codec (8-bit, color types 0 and 2, no interlace) backed by
// zlib. The encoder emits exactly IHDR+IDAT+IEND with a pinned compression
// level, so identical pixels always produce identical bytes.
std::vector<uint8_t> encode_png_rgb8(int width, int height, const std::vector<uint8_t>& rgb);
std::vector<uint8_t> encode_png_gray8(int width, int height, const std::vector<uint8_t>& gray);

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (rgb)
  std::vector<uint8_t> pixels;
};
DecodedPng decode_png(const std::vector<uint8_t>& bytes);

// Quantization helpers shared by PNG and the wire format.
uint8_t unit_to_byte(float v);
std::vector<uint8_t> image_to_rgb8(const Image& img);
Image rgb8_to_image(int width, int height, const std::vector<uint8_t>& rgb);

std::vector<uint8_t> encode_image_png(const Image& img);
Image decode_image_png(const std::vector<uint8_t>& bytes);

// Masks travel as 8-bit grayscale PNG holding exactly 0 or 255.
std::vector<uint8_t> encode_mask_png(const HoleMask& mask);
HoleMask decode_mask_png(const std::vector<uint8_t>& bytes);

// PFM (portable float map), scale -1.0 = little-endian, rows bottom-to-top.
// Depth maps store the +inf no-coverage sentinel as 0.0 in the file.
std::vector<uint8_t> encode_depth_pfm(const DepthMap& depth);
DepthMap decode_depth_pfm(const std::vector<uint8_t>& bytes);

// 3-channel PFM ("PF"), used for point-map grids.
std::vector<uint8_t> encode_pfm3(int width, int height, const std::vector<float>& xyz);
void decode_pfm3(const std::vector<uint8_t>& bytes, int& width, int& height,
                 std::vector<float>& xyz);

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);

void write_image_png(const std::string& path, const Image& img);
Image read_image_png(const std::string& path);
void write_mask_png(const std::string& path, const HoleMask& mask);
HoleMask read_mask_png(const std::string& path);
void write_depth_pfm(const std::string& path, const DepthMap& depth);
DepthMap read_depth_pfm(const std::string& path);

}  // namespace nvs
