#pragma once

#include "bridgeseg/tensor.hpp"

namespace bridgeseg {

// Clamps raw CT intensities (Hounsfield units) to the window [lo, hi].
Tensor hu_window(const Tensor& raw, double lo = -10.0, double hi = 500.0);

// Affine map of [lo, hi] onto [-1, 1]: x -> 2 (x - lo) / (hi - lo) - 1.
// Inputs are expected to be clamped to [lo, hi] already.
Tensor normalize(const Tensor& raw, double lo, double hi);

}  // namespace bridgeseg
