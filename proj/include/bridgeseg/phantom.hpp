#pragma once

#include <cstdint>

#include "bridgeseg/manifest.hpp"

namespace bridgeseg {

// Synthetic two-domain head phantom. Each subject is an elliptical head
// with a bright skull ring and two ventricle-like dark regions whose size
// and position are jittered per subject and modulated per slice. The same
// anatomy is rendered twice: an MRI-style slice (high soft-tissue
// contrast, mild noise) and a CT-style slice (soft-tissue contrast
// compressed to roughly a quarter of the MRI contrast, bright skull ring,
// heavier noise). CT is rendered in Hounsfield units and passed through
// the [-10, 500] HU window before normalization; both domains end up in
// [-1, 1]. The ventricle mask is the exact rasterized geometry.
struct PhantomParams {
  int n_subjects = 1;
  int slices_per_subject = 1;
  int size = 64;
  int first_subject = 0;     // global subject numbering offset
  Split split = Split::TEST;
  bool unpaired = false;     // TRAIN mode: subjects alternate between an
                             // MRI role (slices + masks) and a CT role
                             // (slices only, no masks)
};

// Deterministic: identical arguments give byte-identical pixel data.
Dataset generate_phantoms(std::uint64_t seed, const PhantomParams& params);

// Convenience overload matching the common call shape.
Dataset generate_phantoms(std::uint64_t seed, int n_subjects, int slices_per_subject, int size);

}  // namespace bridgeseg
