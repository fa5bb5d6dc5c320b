#include "bridgeseg/image.hpp"

#include <algorithm>

#include "bridgeseg/errors.hpp"

namespace bridgeseg {

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::MRI: return "MRI";
    case Domain::CT: return "CT";
    case Domain::SYNTH_CT: return "SYNTH_CT";
    case Domain::SYNTH_MRI: return "SYNTH_MRI";
  }
  throw ArgumentError("unknown domain enum value");
}

Domain domain_from_name(const std::string& name) {
  if (name == "MRI") return Domain::MRI;
  if (name == "CT") return Domain::CT;
  if (name == "SYNTH_CT") return Domain::SYNTH_CT;
  if (name == "SYNTH_MRI") return Domain::SYNTH_MRI;
  throw FormatError("unknown domain name: " + name);
}

bool ImageSlice::range_valid() const {
  for (std::int64_t i = 0; i < pixels.size(); ++i) {
    if (pixels[i] < value_range.first || pixels[i] > value_range.second) return false;
  }
  return true;
}

std::int64_t LabelMask::foreground_count() const {
  return std::count(pixels.begin(), pixels.end(), std::uint8_t{1});
}

LabelMask LabelMask::zeros(int h, int w) {
  if (h <= 0 || w <= 0) throw ArgumentError("mask dimensions must be positive");
  LabelMask m;
  m.height = h;
  m.width = w;
  m.pixels.assign(static_cast<std::size_t>(h) * w, 0);
  return m;
}

void quantize_to_float32(Tensor& pixels) {
  for (std::int64_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = static_cast<double>(static_cast<float>(pixels[i]));
  }
}

}  // namespace bridgeseg
