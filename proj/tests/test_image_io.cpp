#include <doctest.h>

#include "nvs/image_io.hpp"
#include "nvs/rng.hpp"

using namespace nvs;

TEST_CASE("png rgb round trip preserves bytes") {
  Rng rng(1);
  const int w = 23, h = 17;
  std::vector<uint8_t> pixels(static_cast<size_t>(w) * h * 3);
  for (auto& p : pixels) p = static_cast<uint8_t>(rng.uniform_index(256));

  const std::vector<uint8_t> png = encode_png_rgb8(w, h, pixels);
  const DecodedPng decoded = decode_png(png);
  CHECK(decoded.width == w);
  CHECK(decoded.height == h);
  CHECK(decoded.channels == 3);
  CHECK(decoded.pixels == pixels);
}

TEST_CASE("png encoding is byte-stable") {
  Image img(9, 7);
  for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = (i % 256) / 255.0f;
  CHECK(encode_image_png(img) == encode_image_png(img));
}

TEST_CASE("quantized image values survive the png round trip exactly") {
  Image img(5, 4);
  Rng rng(2);
  for (auto& v : img.data) v = static_cast<float>(rng.uniform_index(256)) / 255.0f;
  const Image back = decode_image_png(encode_image_png(img));
  CHECK(back == img);
}

TEST_CASE("mask png stores strictly 0 or 255") {
  HoleMask mask(6, 5, 0);
  mask.at(0, 0) = 1;
  mask.at(4, 5) = 1;
  const HoleMask back = decode_mask_png(encode_mask_png(mask));
  CHECK(back == mask);

  // A grayscale PNG with an in-between value is not a valid mask.
  std::vector<uint8_t> gray(6 * 5, 0);
  gray[3] = 128;
  const auto png = encode_png_gray8(6, 5, gray);
  CHECK_THROWS_AS(decode_mask_png(png), Error);
}

TEST_CASE("depth pfm round trips, mapping +inf through the 0.0 sentinel") {
  DepthMap depth(4, 3);
  depth.at(0, 0) = 2.5f;
  depth.at(1, 2) = 0.125f;
  depth.at(2, 3) = 1e-4f;
  const std::vector<uint8_t> pfm = encode_depth_pfm(depth);
  const DepthMap back = decode_depth_pfm(pfm);
  REQUIRE(back.width == 4);
  REQUIRE(back.height == 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 4; ++x) {
      if (std::isinf(depth.at(y, x))) {
        CHECK(std::isinf(back.at(y, x)));
      } else {
        CHECK(back.at(y, x) == depth.at(y, x));  // float bits preserved
      }
    }
  }
}

TEST_CASE("pfm3 round trips float grids") {
  const int w = 5, h = 4;
  std::vector<float> xyz(static_cast<size_t>(w) * h * 3);
  Rng rng(3);
  for (auto& v : xyz) v = static_cast<float>(rng.uniform(-10.0, 10.0));
  int rw = 0, rh = 0;
  std::vector<float> back;
  decode_pfm3(encode_pfm3(w, h, xyz), rw, rh, back);
  CHECK(rw == w);
  CHECK(rh == h);
  CHECK(back == xyz);
}

TEST_CASE("decoders reject malformed payloads with ProtocolError") {
  const std::vector<uint8_t> junk = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  try {
    decode_png(junk);
    FAIL("expected ProtocolError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::protocol);
  }

  std::vector<uint8_t> truncated = encode_png_gray8(4, 4, std::vector<uint8_t>(16, 7));
  truncated.resize(truncated.size() / 2);
  CHECK_THROWS_AS(decode_png(truncated), Error);

  CHECK_THROWS_AS(decode_depth_pfm({'P', 'f', '\n'}), Error);
}
