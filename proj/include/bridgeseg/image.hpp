#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bridgeseg/tensor.hpp"

namespace bridgeseg {

enum class Domain { MRI, CT, SYNTH_CT, SYNTH_MRI };

std::string domain_name(Domain d);
Domain domain_from_name(const std::string& name);

// One 2D grayscale slice. Pixels are stored as doubles; slices that have
// been normalized carry value_range (-1, 1) and every pixel inside it.
// On-disk rasters are 32-bit floats, so generated and loaded slices hold
// float-representable values (exact save/load round trips).
struct ImageSlice {
  Tensor pixels;  // rank-2 (H, W)
  Domain domain = Domain::MRI;
  std::string subject_id;
  int slice_index = 0;
  std::pair<double, double> value_range{-1.0, 1.0};

  int height() const { return pixels.dim(0); }
  int width() const { return pixels.dim(1); }

  // True when every pixel lies inside value_range.
  bool range_valid() const;
};

// Binary per-pixel mask aligned to a slice; 1 = foreground structure,
// 0 = background.
struct LabelMask {
  std::vector<std::uint8_t> pixels;  // row-major (H, W)
  int height = 0;
  int width = 0;
  std::string subject_id;
  int slice_index = 0;

  std::uint8_t at(int y, int x) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int y, int x) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::int64_t size() const { return static_cast<std::int64_t>(pixels.size()); }
  std::int64_t foreground_count() const;
  bool same_shape(const LabelMask& other) const {
    return height == other.height && width == other.width;
  }

  static LabelMask zeros(int h, int w);
};

// Round every pixel through float32 so in-memory values match the
// on-disk raster precision.
void quantize_to_float32(Tensor& pixels);

}  // namespace bridgeseg
