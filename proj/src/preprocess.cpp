#include "bridgeseg/preprocess.hpp"

#include <algorithm>

#include "bridgeseg/errors.hpp"

namespace bridgeseg {

Tensor hu_window(const Tensor& raw, double lo, double hi) {
  if (lo >= hi) throw ArgumentError("hu_window: lo must be < hi");
  Tensor out = raw;
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], lo, hi);
  return out;
}

Tensor normalize(const Tensor& raw, double lo, double hi) {
  if (lo >= hi) throw ArgumentError("normalize: lo must be < hi");
  const double scale = 2.0 / (hi - lo);
  Tensor out = raw;
  for (std::int64_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp((out[i] - lo) * scale - 1.0, -1.0, 1.0);
  }
  return out;
}

}  // namespace bridgeseg
