#include "nvs/image_io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "nvs/error.hpp"

namespace nvs {
namespace {

constexpr int kDeflateLevel = 6;  // pinned for byte-stable output

void put_u32_be(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t get_u32_be(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void append_chunk(std::vector<uint8_t>& out, const char type[4],
                  const std::vector<uint8_t>& payload) {
  put_u32_be(out, static_cast<uint32_t>(payload.size()));
  const size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const uint32_t crc = crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
  put_u32_be(out, crc);
}

std::vector<uint8_t> zlib_deflate(const std::vector<uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> out(bound);
  if (compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), kDeflateLevel) != Z_OK) {
    throw Error::internal("PngEncodeFailure", "deflate failed");
  }
  out.resize(bound);
  return out;
}

std::vector<uint8_t> zlib_inflate(const std::vector<uint8_t>& compressed, size_t expected) {
  std::vector<uint8_t> out(expected);
  uLongf len = static_cast<uLongf>(expected);
  const int rc = uncompress(out.data(), &len, compressed.data(), static_cast<uLong>(compressed.size()));
  if (rc != Z_OK || len != expected) {
    throw Error::protocol("PNG IDAT stream is corrupt or has the wrong size");
  }
  return out;
}

const uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::vector<uint8_t> encode_png(int width, int height, int channels,
                                const std::vector<uint8_t>& pixels) {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<size_t>(width) * height * channels) {
    throw Error::validation("ShapeMismatch", "pixel buffer does not match PNG dimensions");
  }
  const size_t stride = static_cast<size_t>(width) * channels;
  std::vector<uint8_t> raw;
  raw.reserve((stride + 1) * height);
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);  // filter: None
    raw.insert(raw.end(), pixels.begin() + y * stride, pixels.begin() + (y + 1) * stride);
  }

  std::vector<uint8_t> ihdr;
  put_u32_be(ihdr, static_cast<uint32_t>(width));
  put_u32_be(ihdr, static_cast<uint32_t>(height));
  ihdr.push_back(8);                                        // bit depth
  ihdr.push_back(channels == 3 ? 2 : 0);                    // color type
  ihdr.push_back(0);                                        // compression
  ihdr.push_back(0);                                        // filter method
  ihdr.push_back(0);                                        // no interlace

  std::vector<uint8_t> out(kPngSignature, kPngSignature + 8);
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", zlib_deflate(raw));
  append_chunk(out, "IEND", {});
  return out;
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<uint8_t> encode_png_rgb8(int width, int height, const std::vector<uint8_t>& rgb) {
  return encode_png(width, height, 3, rgb);
}

std::vector<uint8_t> encode_png_gray8(int width, int height, const std::vector<uint8_t>& gray) {
  return encode_png(width, height, 1, gray);
}

DecodedPng decode_png(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0) {
    throw Error::protocol("not a PNG stream");
  }
  DecodedPng png;
  int bit_depth = 0;
  int color_type = -1;
  std::vector<uint8_t> idat;
  size_t pos = 8;
  bool saw_end = false;
  while (pos + 8 <= bytes.size()) {
    const uint32_t len = get_u32_be(bytes.data() + pos);
    if (pos + 12 + len > bytes.size()) throw Error::protocol("truncated PNG chunk");
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    const uint8_t* payload = bytes.data() + pos + 8;
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw Error::protocol("bad IHDR length");
      png.width = static_cast<int>(get_u32_be(payload));
      png.height = static_cast<int>(get_u32_be(payload + 4));
      bit_depth = payload[8];
      color_type = payload[9];
      if (payload[10] != 0 || payload[11] != 0 || payload[12] != 0) {
        throw Error::protocol("unsupported PNG compression/filter/interlace");
      }
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), payload, payload + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      saw_end = true;
      break;
    }
    pos += 12 + len;
  }
  if (!saw_end || png.width <= 0 || png.height <= 0) throw Error::protocol("malformed PNG");
  if (bit_depth != 8 || (color_type != 0 && color_type != 2)) {
    throw Error::protocol("unsupported PNG format (need 8-bit gray or rgb)");
  }
  png.channels = color_type == 2 ? 3 : 1;

  const size_t stride = static_cast<size_t>(png.width) * png.channels;
  const std::vector<uint8_t> raw = zlib_inflate(idat, (stride + 1) * png.height);

  png.pixels.assign(stride * png.height, 0);
  const int bpp = png.channels;
  for (int y = 0; y < png.height; ++y) {
    const uint8_t filter = raw[y * (stride + 1)];
    const uint8_t* src = raw.data() + y * (stride + 1) + 1;
    uint8_t* dst = png.pixels.data() + y * stride;
    const uint8_t* prev = y > 0 ? png.pixels.data() + (y - 1) * stride : nullptr;
    for (size_t i = 0; i < stride; ++i) {
      const int a = i >= static_cast<size_t>(bpp) ? dst[i - bpp] : 0;
      const int b = prev ? prev[i] : 0;
      const int c = (prev && i >= static_cast<size_t>(bpp)) ? prev[i - bpp] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw Error::protocol("unknown PNG filter type");
      }
      dst[i] = static_cast<uint8_t>(v);
    }
  }
  return png;
}

uint8_t unit_to_byte(float v) {
  const float clamped = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<uint8_t>(std::lround(clamped * 255.0f));
}

std::vector<uint8_t> image_to_rgb8(const Image& img) {
  std::vector<uint8_t> out(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) out[i] = unit_to_byte(img.data[i]);
  return out;
}

Image rgb8_to_image(int width, int height, const std::vector<uint8_t>& rgb) {
  Image img(width, height);
  for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = rgb[i] / 255.0f;
  return img;
}

std::vector<uint8_t> encode_image_png(const Image& img) {
  return encode_png_rgb8(img.width, img.height, image_to_rgb8(img));
}

Image decode_image_png(const std::vector<uint8_t>& bytes) {
  const DecodedPng png = decode_png(bytes);
  if (png.channels != 3) throw Error::protocol("expected an RGB PNG");
  return rgb8_to_image(png.width, png.height, png.pixels);
}

std::vector<uint8_t> encode_mask_png(const HoleMask& mask) {
  std::vector<uint8_t> gray(mask.values.size());
  for (size_t i = 0; i < mask.values.size(); ++i) gray[i] = mask.values[i] ? 255 : 0;
  return encode_png_gray8(mask.width, mask.height, gray);
}

HoleMask decode_mask_png(const std::vector<uint8_t>& bytes) {
  const DecodedPng png = decode_png(bytes);
  if (png.channels != 1) throw Error::protocol("expected a grayscale mask PNG");
  HoleMask mask(png.width, png.height, 0);
  for (size_t i = 0; i < png.pixels.size(); ++i) {
    if (png.pixels[i] == 255) {
      mask.values[i] = 1;
    } else if (png.pixels[i] != 0) {
      throw Error::protocol("mask PNG must contain only 0 or 255");
    }
  }
  return mask;
}

namespace {

void append_pfm_header(std::vector<uint8_t>& out, const char* magic, int w, int h) {
  char header[64];
  const int n = std::snprintf(header, sizeof(header), "%s\n%d %d\n-1.0\n", magic, w, h);
  out.insert(out.end(), header, header + n);
}

// Parses "Pf\n{w} {h}\n{scale}\n"; returns offset of the raster.
size_t parse_pfm_header(const std::vector<uint8_t>& bytes, const char* magic, int& w, int& h) {
  const std::string text(bytes.begin(), bytes.begin() + std::min<size_t>(bytes.size(), 64));
  if (text.rfind(magic, 0) != 0) throw Error::protocol("not the expected PFM type");
  size_t pos = std::strlen(magic);
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_token = [&] {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  };
  try {
    w = std::stoi(read_token());
    h = std::stoi(read_token());
    const double scale = std::stod(read_token());
    if (scale >= 0.0) throw Error::protocol("big-endian PFM is not supported");
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error::protocol("malformed PFM header");
  }
  if (w <= 0 || h <= 0) throw Error::protocol("bad PFM dimensions");
  return pos + 1;  // single whitespace after scale
}

void append_float_le(std::vector<uint8_t>& out, float v) {
  uint8_t b[4];
  std::memcpy(b, &v, 4);
  out.insert(out.end(), b, b + 4);
}

}  // namespace

std::vector<uint8_t> encode_depth_pfm(const DepthMap& depth) {
  std::vector<uint8_t> out;
  append_pfm_header(out, "Pf", depth.width, depth.height);
  out.reserve(out.size() + depth.data.size() * 4);
  for (int y = depth.height - 1; y >= 0; --y) {  // PFM rows run bottom-to-top
    for (int x = 0; x < depth.width; ++x) {
      const float v = depth.at(y, x);
      append_float_le(out, std::isinf(v) ? 0.0f : v);
    }
  }
  return out;
}

DepthMap decode_depth_pfm(const std::vector<uint8_t>& bytes) {
  int w = 0;
  int h = 0;
  const size_t offset = parse_pfm_header(bytes, "Pf", w, h);
  if (bytes.size() < offset + static_cast<size_t>(w) * h * 4) {
    throw Error::protocol("truncated PFM raster");
  }
  DepthMap depth(w, h);
  size_t pos = offset;
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x, pos += 4) {
      float v;
      std::memcpy(&v, bytes.data() + pos, 4);
      depth.at(y, x) = v == 0.0f ? std::numeric_limits<float>::infinity() : v;
    }
  }
  return depth;
}

std::vector<uint8_t> encode_pfm3(int width, int height, const std::vector<float>& xyz) {
  if (xyz.size() != static_cast<size_t>(width) * height * 3) {
    throw Error::validation("ShapeMismatch", "PFM buffer does not match dimensions");
  }
  std::vector<uint8_t> out;
  append_pfm_header(out, "PF", width, height);
  out.reserve(out.size() + xyz.size() * 4);
  for (int y = height - 1; y >= 0; --y) {
    const float* row = xyz.data() + static_cast<size_t>(y) * width * 3;
    for (int i = 0; i < width * 3; ++i) append_float_le(out, row[i]);
  }
  return out;
}

void decode_pfm3(const std::vector<uint8_t>& bytes, int& width, int& height,
                 std::vector<float>& xyz) {
  const size_t offset = parse_pfm_header(bytes, "PF", width, height);
  const size_t count = static_cast<size_t>(width) * height * 3;
  if (bytes.size() < offset + count * 4) throw Error::protocol("truncated PFM raster");
  xyz.assign(count, 0.0f);
  size_t pos = offset;
  for (int y = height - 1; y >= 0; --y) {
    float* row = xyz.data() + static_cast<size_t>(y) * width * 3;
    for (int i = 0; i < width * 3; ++i, pos += 4) std::memcpy(row + i, bytes.data() + pos, 4);
  }
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::validation("IoFailure", "cannot open " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error::validation("IoFailure", "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error::validation("IoFailure", "short write to " + path);
}

void write_image_png(const std::string& path, const Image& img) {
  write_file(path, encode_image_png(img));
}
Image read_image_png(const std::string& path) { return decode_image_png(read_file(path)); }
void write_mask_png(const std::string& path, const HoleMask& mask) {
  write_file(path, encode_mask_png(mask));
}
HoleMask read_mask_png(const std::string& path) { return decode_mask_png(read_file(path)); }
void write_depth_pfm(const std::string& path, const DepthMap& depth) {
  write_file(path, encode_depth_pfm(depth));
}
DepthMap read_depth_pfm(const std::string& path) { return decode_depth_pfm(read_file(path)); }

}  // namespace nvs
