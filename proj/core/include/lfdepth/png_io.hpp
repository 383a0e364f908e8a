#pragma once

#include <filesystem>

#include "lfdepth/image.hpp"

namespace lfdepth {

// 8-bit PNG in, float image out with values mapped to [0, 1] (v / 255).
// Grayscale files load as 1-channel, everything else as 3-channel RGB; alpha
// is dropped, 16-bit files are reduced to 8.
Image read_png(const std::filesystem::path& path);

// Clamps to [0, 1], quantizes with round(v * 255), writes 8-bit gray or RGB
// depending on the image's channel count.
void write_png(const Image& img, const std::filesystem::path& path);

// Renders a scalar map to 8-bit grayscale: [lo, hi] maps affinely to
// [0, 255], values outside clamp, non-finite samples render as 0. Rounding is
// half-away-from-zero, so the exact midpoint lands on 128.
void write_gray_png(const Map2D& map, const std::filesystem::path& path, double lo, double hi);

}  // namespace lfdepth
