#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bridgeseg/image.hpp"
#include "bridgeseg/tensor.hpp"

namespace bridgeseg {

// A set of candidate masks for one slice, e.g. simulated atlas
// propagations. All masks share one shape.
struct AtlasVoteSet {
  std::vector<LabelMask> masks;
  std::vector<std::string> source_ids;
};

// Deterministic boundary perturbation: flips at most
// magnitude * (boundary length) pixels, all of them on the mask boundary
// (pixels whose 4-neighborhood mixes foreground and background). Output
// stays binary and keeps the input shape. magnitude must be in [0, 1].
LabelMask perturb_mask(const LabelMask& mask, std::uint64_t seed, double magnitude);

// Majority voting: a pixel is foreground iff strictly more than half of
// the votes are foreground; even-K ties resolve to background.
LabelMask majority_vote(const AtlasVoteSet& votes);

// Per-pixel fraction of foreground votes, in [0, 1]. Serves as the
// fusion-confidence map accompanying the voted mask.
Tensor vote_fraction(const AtlasVoteSet& votes);

// Convenience: builds K perturbed copies of a reference mask and fuses
// them, simulating a silver-label pipeline at small scale.
LabelMask silver_label(const LabelMask& reference, int k, std::uint64_t seed, double magnitude);

}  // namespace bridgeseg
