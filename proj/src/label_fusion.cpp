#include "bridgeseg/label_fusion.hpp"

#include <algorithm>
#include <numeric>

#include "bridgeseg/errors.hpp"
#include "bridgeseg/rng.hpp"

namespace bridgeseg {

namespace {

constexpr std::uint64_t kTagPerturb = hash_tag("label_fusion.perturb");

// Pixels whose 4-neighborhood mixes foreground and background.
std::vector<std::size_t> boundary_pixels(const LabelMask& m) {
  std::vector<std::size_t> out;
  const int h = m.height, w = m.width;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t v = m.at(y, x);
      const bool differs = (y > 0 && m.at(y - 1, x) != v) || (y + 1 < h && m.at(y + 1, x) != v) ||
                           (x > 0 && m.at(y, x - 1) != v) || (x + 1 < w && m.at(y, x + 1) != v);
      if (differs) out.push_back(static_cast<std::size_t>(y) * w + x);
    }
  }
  return out;
}

void check_same_shape(const AtlasVoteSet& votes) {
  if (votes.masks.empty()) throw ArgumentError("vote set must contain at least one mask");
  for (const auto& m : votes.masks) {
    if (!m.same_shape(votes.masks.front())) {
      throw ArgumentError("vote masks have mismatched shapes");
    }
  }
}

}  // namespace

LabelMask perturb_mask(const LabelMask& mask, std::uint64_t seed, double magnitude) {
  if (magnitude < 0.0 || magnitude > 1.0) {
    throw ArgumentError("perturb_mask: magnitude must be in [0, 1]");
  }
  LabelMask out = mask;
  if (magnitude == 0.0) return out;

  auto boundary = boundary_pixels(mask);
  const auto n_flips = static_cast<std::size_t>(magnitude * static_cast<double>(boundary.size()));
  if (n_flips == 0) return out;

  // Seeded Fisher-Yates prefix selection.
  Rng rng(derive_seed(seed, {kTagPerturb}));
  for (std::size_t i = 0; i < n_flips; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(boundary.size() - i));
    std::swap(boundary[i], boundary[j]);
    out.pixels[boundary[i]] ^= 1;
  }
  return out;
}

LabelMask majority_vote(const AtlasVoteSet& votes) {
  check_same_shape(votes);
  const auto& first = votes.masks.front();
  const std::size_t k = votes.masks.size();
  LabelMask out = LabelMask::zeros(first.height, first.width);
  out.subject_id = first.subject_id;
  out.slice_index = first.slice_index;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    std::size_t ones = 0;
    for (const auto& m : votes.masks) ones += m.pixels[i];
    out.pixels[i] = (2 * ones > k) ? 1 : 0;
  }
  return out;
}

Tensor vote_fraction(const AtlasVoteSet& votes) {
  check_same_shape(votes);
  const auto& first = votes.masks.front();
  Tensor frac({first.height, first.width});
  const double inv_k = 1.0 / static_cast<double>(votes.masks.size());
  for (std::size_t i = 0; i < first.pixels.size(); ++i) {
    std::size_t ones = 0;
    for (const auto& m : votes.masks) ones += m.pixels[i];
    frac[static_cast<std::int64_t>(i)] = static_cast<double>(ones) * inv_k;
  }
  return frac;
}

LabelMask silver_label(const LabelMask& reference, int k, std::uint64_t seed, double magnitude) {
  if (k < 1) throw ArgumentError("silver_label: k must be >= 1");
  AtlasVoteSet votes;
  for (int i = 0; i < k; ++i) {
    votes.masks.push_back(perturb_mask(reference, derive_seed(seed, {static_cast<std::uint64_t>(i)}), magnitude));
    votes.source_ids.push_back("atlas" + std::to_string(i));
  }
  return majority_vote(votes);
}

}  // namespace bridgeseg
