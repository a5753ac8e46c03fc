#pragma once

#include "protrack/image.hpp"

#include <filesystem>

namespace protrack {

/// Decoded PNG with its source bit depth (8 or 16). Intensities are divided
/// by 255 / 65535 on load, so values land in [0,1].
struct LoadedPng {
  Image image;
  int bit_depth = 8;
};

LoadedPng read_png(const std::filesystem::path& path);

/// 8-bit grayscale or RGB; real values are quantized with
/// round-half-away-from-zero on v * 255.
void write_png8(const std::filesystem::path& path, const Image& img);

/// 16-bit single-channel (v * 65535, same rounding).
void write_png16(const std::filesystem::path& path, const Image& img);

/// Quantization used by the 8-bit writer, exposed for tests.
int quantize8(double v);

}  // namespace protrack
