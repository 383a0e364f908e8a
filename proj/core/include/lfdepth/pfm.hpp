#pragma once

#include <filesystem>

#include "lfdepth/disparity.hpp"
#include "lfdepth/image.hpp"

namespace lfdepth {

// Grayscale PFM ("Pf"). Header: "Pf\n<width> <height>\n<scale>\n" followed by
// width*height float32 samples, rows stored bottom-up. A negative scale means
// little-endian payload, positive big-endian; writes always use the host
// order. Values round-trip bit-exactly at float32 precision.
Map2D read_pfm(const std::filesystem::path& path);
void write_pfm(const Map2D& map, const std::filesystem::path& path);

// Disparity variants: invalid pixels are stored as NaN and restored as
// invalid on read (any non-finite sample marks the pixel invalid).
DisparityMap read_pfm_disparity(const std::filesystem::path& path);
void write_pfm_disparity(const DisparityMap& map, const std::filesystem::path& path);

}  // namespace lfdepth
