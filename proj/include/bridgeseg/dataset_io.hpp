#pragma once

#include <filesystem>

#include "bridgeseg/manifest.hpp"

namespace bridgeseg {

// On-disk layout: one manifest.json plus one raster file per entry.
// Image rasters are row-major little-endian 32-bit floats (.f32), masks
// are one byte per pixel (.u8). Pixel round trips are exact.
std::filesystem::path save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

Dataset load_dataset(const std::filesystem::path& dir);

// Raster helpers, also used for exported uncertainty maps.
void write_f32_raster(const Tensor& pixels, const std::filesystem::path& path);
Tensor read_f32_raster(const std::filesystem::path& path, int height, int width);
void write_u8_raster(const LabelMask& mask, const std::filesystem::path& path);
LabelMask read_u8_raster(const std::filesystem::path& path, int height, int width);

}  // namespace bridgeseg
