#pragma once

#include <filesystem>

#include "gsnav/rasterizer.hpp"

namespace gsnav {

/// Binary PPM (P6, 8-bit); values in [0, 1] are clamped and rounded.
void write_ppm(const Image& rgb, const std::filesystem::path& path);

/// Binary PGM (P5, 16-bit big-endian) with depth in millimeters, saturating at 65535.
void write_pgm_depth(const Image& depth, const std::filesystem::path& path);

Image read_ppm(const std::filesystem::path& path);
Image read_pgm_depth(const std::filesystem::path& path);

}  // namespace gsnav
