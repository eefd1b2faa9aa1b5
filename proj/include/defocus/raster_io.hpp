#pragma once

// File formats.
//
// Images: 8-bit PNG (grayscale, RGB, palette) and binary PGM/PPM (P5/P6).
// Bytes map linearly to [0, 1]. Saving picks the format from the extension
// (.png, .pgm, .ppm); loading sniffs the magic bytes.
//
// Float maps: PFM-style single-channel files
//
//     Pf\n
//     [# comment lines]
//     <width> <height>\n
//     <scale>\n            (negative: little-endian payload)
//     <width*height float32, bottom row first>
//
// NaN encodes an invalid sample. Blur maps are written with the comment
// `# blurmap px`. Payload size must match the header exactly.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "defocus/raster.hpp"

namespace defocus {

Image load_image(const std::filesystem::path& path);
void save_image(const Image& image, const std::filesystem::path& path);

Image decode_image(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pnm(const Image& image);
std::vector<std::uint8_t> encode_png(const Image& image);

/// Intensity in [0, 1] to the nearest byte (clamped).
std::uint8_t quantize(double value);

struct FloatMap {
  int width = 0;
  int height = 0;
  std::vector<float> data;  // row-major, top row first
  std::string comment;      // first comment line, without "# "
};

FloatMap decode_pfm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pfm(const FloatMap& map);

DepthMap load_depth(const std::filesystem::path& path);
void save_depth(const DepthMap& depth, const std::filesystem::path& path);

BlurMap load_blur(const std::filesystem::path& path);
void save_blur(const BlurMap& blur, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace defocus
