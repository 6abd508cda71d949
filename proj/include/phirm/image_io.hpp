#pragma once

#include <filesystem>
#include <string>

#include "phirm/plane.hpp"

namespace phirm {

struct LoadedImage {
  RawImage samples;
  int bits_per_sample = 8;
};

/// Reads a single-channel PNG or TIFF (8- or 16-bit), detected by magic
/// bytes. Color, palette and multi-sample files are rejected with a
/// diagnostic naming the path. TIFF support covers strip-organized
/// grayscale files with no compression, Deflate or LZW.
LoadedImage load_image(const std::filesystem::path& path);

/// Reads an image that must already be 8-bit; deeper files are an error
/// (scores are defined on 8-bit intensities; normalize deeper data first).
GrayImage load_gray8(const std::filesystem::path& path);

/// 8-bit grayscale PNG.
void write_png8(const std::filesystem::path& path, const GrayImage& img);

/// Mask as 8-bit PNG with values {0, 255}.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace phirm
