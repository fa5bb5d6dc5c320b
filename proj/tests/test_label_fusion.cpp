#include <doctest.h>

#include <algorithm>

#include "bridgeseg/errors.hpp"
#include "bridgeseg/label_fusion.hpp"
#include "bridgeseg/metrics.hpp"
#include "bridgeseg/phantom.hpp"
#include "bridgeseg/rng.hpp"

using namespace bridgeseg;

TEST_CASE("perturb_mask zero magnitude and determinism") {
  const Dataset ds = generate_phantoms(4, 1, 1, 64);
  const LabelMask& m = ds.masks[0];
  CHECK(perturb_mask(m, 1, 0.0).pixels == m.pixels);
  const LabelMask a = perturb_mask(m, 42, 0.3);
  const LabelMask b = perturb_mask(m, 42, 0.3);
  CHECK(a.pixels == b.pixels);
  const LabelMask c = perturb_mask(m, 43, 0.3);
  CHECK(a.pixels != c.pixels);
  CHECK_THROWS_AS(perturb_mask(m, 1, 1.5), ArgumentError);
  CHECK_THROWS_AS(perturb_mask(m, 1, -0.1), ArgumentError);
}

TEST_CASE("perturbed phantom masks stay close in dice") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Dataset ds = generate_phantoms(seed + 10, 1, 1, 64);
    const LabelMask& m = ds.masks[0];
    const LabelMask p = perturb_mask(m, seed, 0.3);
    for (auto v : p.pixels) CHECK((v == 0 || v == 1));
    CHECK(dice(m, p) >= 0.8);
  }
}

TEST_CASE("majority_vote definition and ties") {
  LabelMask ones = LabelMask::zeros(1, 1);
  ones.pixels[0] = 1;
  LabelMask zeros = LabelMask::zeros(1, 1);

  // K=3: (1,1,0) -> 1, (1,0,0) -> 0.
  CHECK(majority_vote({{ones, ones, zeros}, {}}).pixels[0] == 1);
  CHECK(majority_vote({{ones, zeros, zeros}, {}}).pixels[0] == 0);
  // K=2 tie -> background.
  CHECK(majority_vote({{ones, zeros}, {}}).pixels[0] == 0);

  LabelMask wrong = LabelMask::zeros(2, 1);
  CHECK_THROWS_AS(majority_vote({{ones, wrong}, {}}), ArgumentError);
  CHECK_THROWS_AS(majority_vote({{}, {}}), ArgumentError);
}

TEST_CASE("majority_vote unanimity, permutation invariance, monotonicity") {
  const Dataset ds = generate_phantoms(2, 1, 1, 64);
  const LabelMask& m = ds.masks[0];

  // Unanimity: K copies vote to the same mask.
  CHECK(majority_vote({{m, m, m, m, m}, {}}).pixels == m.pixels);

  AtlasVoteSet votes;
  for (std::uint64_t i = 0; i < 5; ++i) votes.masks.push_back(perturb_mask(m, i, 0.25));
  const LabelMask fused = majority_vote(votes);

  AtlasVoteSet shuffled = votes;
  Rng rng(9);
  for (std::size_t i = shuffled.masks.size(); i > 1; --i) {
    std::swap(shuffled.masks[i - 1], shuffled.masks[rng.uniform_int(i)]);
  }
  CHECK(majority_vote(shuffled).pixels == fused.pixels);

  // Adding a superset of the fused output twice (K stays odd) keeps every
  // fused foreground pixel.
  LabelMask superset = fused;
  for (auto& v : superset.pixels) v = std::max<std::uint8_t>(v, 0);
  superset = perturb_mask(fused, 7, 0.0);
  AtlasVoteSet grown = votes;
  grown.masks.push_back(superset);
  grown.masks.push_back(superset);
  const LabelMask fused7 = majority_vote(grown);
  for (std::size_t i = 0; i < fused.pixels.size(); ++i) {
    if (fused.pixels[i] == 1) CHECK(fused7.pixels[i] == 1);
  }
}

TEST_CASE("vote_fraction is the per-pixel foreground share") {
  LabelMask ones = LabelMask::zeros(1, 2);
  ones.pixels = {1, 1};
  LabelMask mixed = LabelMask::zeros(1, 2);
  mixed.pixels = {1, 0};
  LabelMask zeros = LabelMask::zeros(1, 2);
  const Tensor f = vote_fraction({{ones, mixed, zeros}, {}});
  CHECK(f[0] == doctest::Approx(2.0 / 3.0));
  CHECK(f[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("silver_label stays close to the reference mask") {
  const Dataset ds = generate_phantoms(6, 1, 1, 64);
  const LabelMask& m = ds.masks[0];
  const LabelMask silver = silver_label(m, 5, 31, 0.3);
  CHECK(dice(m, silver) >= 0.9);
}
