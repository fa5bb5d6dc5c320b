#include <doctest.h>

#include <cmath>

#include "bridgeseg/errors.hpp"
#include "bridgeseg/metrics.hpp"
#include "bridgeseg/rng.hpp"
#include "oracles.hpp"

using namespace bridgeseg;

namespace {

LabelMask mask_from(std::initializer_list<std::initializer_list<int>> rows) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.begin()->size());
  LabelMask m = LabelMask::zeros(h, w);
  int y = 0;
  for (const auto& row : rows) {
    int x = 0;
    for (int v : row) m.at(y, x++) = static_cast<std::uint8_t>(v);
    ++y;
  }
  return m;
}

}  // namespace

TEST_CASE("dice basics") {
  const LabelMask a = mask_from({{1, 1}, {1, 1}});
  CHECK(dice(a, a) == 1.0);

  const LabelMask b = mask_from({{1, 0}, {0, 0}});
  const LabelMask c = mask_from({{0, 0}, {0, 1}});
  CHECK(dice(b, c) == 0.0);

  // |A| = 4, B subset with |B| = 2 -> 2*2/(4+2).
  const LabelMask sub = mask_from({{1, 1}, {0, 0}});
  CHECK(dice(a, sub) == doctest::Approx(2.0 * 2.0 / 6.0).epsilon(1e-12));

  const LabelMask empty = LabelMask::zeros(2, 2);
  CHECK(dice(empty, empty) == 1.0);

  LabelMask other_shape = LabelMask::zeros(3, 2);
  CHECK_THROWS_AS(dice(a, other_shape), ArgumentError);
}

TEST_CASE("iou basics and dice identity") {
  const LabelMask a = mask_from({{1, 1}, {1, 1}});
  const LabelMask sub = mask_from({{1, 1}, {0, 0}});
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, sub) == doctest::Approx(0.5).epsilon(1e-12));
  const double d = dice(a, sub);
  CHECK(iou(a, sub) == doctest::Approx(d / (2.0 - d)).epsilon(1e-12));

  const LabelMask b = mask_from({{1, 0}, {0, 0}});
  const LabelMask c = mask_from({{0, 0}, {0, 1}});
  CHECK(iou(b, c) == 0.0);
}

TEST_CASE("iou-dice identity holds on random mask pairs") {
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = oracles::random_mask(12, 12, rng, 0.3);
    auto b = oracles::random_mask(12, 12, rng, 0.3);
    const double d = dice(a, b);
    const double j = iou(a, b);
    CHECK(std::abs(j - d / (2.0 - d)) <= 1e-12);
    CHECK(d >= j);
    CHECK(dice(b, a) == d);
    CHECK(iou(b, a) == j);
  }
}

TEST_CASE("mse basics") {
  Tensor x = Tensor::full({4, 4}, 0.25);
  CHECK(mse(x, x) == 0.0);
  Tensor y = x;
  for (int i = 0; i < 16; ++i) y[i] += 0.1;
  CHECK(mse(x, y) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("ssim identity, symmetry, and oracle agreement") {
  Rng rng(5);
  Tensor x({16, 16}), y({16, 16});
  for (int i = 0; i < 256; ++i) {
    x[i] = rng.uniform(-1.0, 1.0);
    y[i] = rng.uniform(-1.0, 1.0);
  }
  CHECK(ssim(x, x) == 1.0);
  CHECK(ssim(x, y) == doctest::Approx(ssim(y, x)).epsilon(1e-15));

  const SsimConfig cfg;
  for (int trial = 0; trial < 5; ++trial) {
    Tensor a({16, 16}), b({16, 16});
    for (int i = 0; i < 256; ++i) {
      a[i] = rng.uniform(-1.0, 1.0);
      b[i] = std::clamp(a[i] + rng.normal(0.0, 0.2), -1.0, 1.0);
    }
    const double ref = oracles::ssim_reference(a, b, cfg.window, cfg.sigma, cfg.k1, cfg.k2, cfg.dynamic_range);
    CHECK(std::abs(ssim(a, b) - ref) < 1e-6);
  }
}

TEST_CASE("dice3d pools foreground sizes instead of averaging slice dice") {
  const LabelMask full = mask_from({{1, 1}, {1, 1}});
  const LabelMask empty = LabelMask::zeros(2, 2);
  const LabelMask half = mask_from({{1, 1}, {0, 0}});

  // Identical volumes.
  CHECK(dice3d({full, half}, {full, half}) == 1.0);
  // Single-slice volume reduces to 2D dice.
  CHECK(dice3d({half}, {full}) == dice(half, full));
  // Per-slice dice 1.0 and 0.0 with equal foreground sizes s -> 0.5.
  const LabelMask s1 = mask_from({{1, 1}, {0, 0}});
  const LabelMask s2 = mask_from({{0, 0}, {1, 1}});
  CHECK(dice3d({s1, s1}, {s1, s2}) == doctest::Approx(0.5).epsilon(1e-12));

  // Counterexample against mean-of-slice-dice: big slice perfect, small
  // slice wrong.
  const LabelMask one = mask_from({{1, 0}, {0, 0}});
  const LabelMask other = mask_from({{0, 1}, {0, 0}});
  const double pooled = dice3d({full, one}, {full, other});
  const double mean_of_dice = (dice(full, full) + dice(one, other)) / 2.0;
  CHECK(pooled == doctest::Approx(8.0 / 10.0).epsilon(1e-12));
  CHECK(pooled != doctest::Approx(mean_of_dice).epsilon(1e-12));

  CHECK_THROWS_AS(dice3d({full}, {full, full}), ArgumentError);
}

TEST_CASE("pearson basics") {
  CHECK(pearson({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson({1, 2, 3}, {-1, -2, -3}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(pearson({1, 2}, {1, 2}), ArgumentError);
  CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), DegenerateInputError);
}

TEST_CASE("pearson is invariant under positive affine transforms") {
  Rng rng(77);
  std::vector<double> xs, ys;
  for (int i = 0; i < 25; ++i) {
    xs.push_back(rng.normal());
    ys.push_back(0.5 * xs.back() + rng.normal());
  }
  const double r = pearson(xs, ys);
  std::vector<double> xs2 = xs, ys2 = ys;
  for (auto& v : xs2) v = 3.7 * v + 11.0;
  for (auto& v : ys2) v = 0.02 * v - 5.0;
  CHECK(std::abs(pearson(xs2, ys2) - r) <= 1e-12);
}

TEST_CASE("spearman matches pearson on ranks and handles ties") {
  std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> ys = {2, 1, 5, 3, 4};
  CHECK(spearman(xs, ys) == doctest::Approx(pearson({1, 2, 3, 4, 5}, {2, 1, 5, 3, 4})));
  // Monotone transform invariance.
  std::vector<double> ys_exp;
  for (double v : ys) ys_exp.push_back(std::exp(v));
  CHECK(spearman(xs, ys_exp) == doctest::Approx(spearman(xs, ys)).epsilon(1e-12));
}

TEST_CASE("paired t-test matches the textbook oracle") {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> ys = {2, 3, 4, 5, 6};
  const std::vector<double> noise = {0.1, -0.1, 0.1, -0.1, 0.1};
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] += noise[i];

  const TTestResult r = paired_ttest(xs, ys);
  const double t_ref = oracles::paired_t_statistic_reference(xs, ys);
  const double p_ref = oracles::student_t_two_sided_p_reference(t_ref, static_cast<int>(xs.size()) - 1);
  CHECK(std::abs(r.t - t_ref) < 1e-9);
  CHECK(std::abs(r.p - p_ref) < 1e-9);

  // Swapping the arguments negates t and preserves p.
  const TTestResult rs = paired_ttest(ys, xs);
  CHECK(rs.t == doctest::Approx(-r.t).epsilon(1e-12));
  CHECK(rs.p == doctest::Approx(r.p).epsilon(1e-12));
}

TEST_CASE("paired t-test rejects constant differences") {
  std::vector<double> xs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> ys = xs;
  for (auto& v : ys) v += 0.5;
  CHECK_THROWS_AS(paired_ttest(xs, ys), DegenerateInputError);
}

TEST_CASE("student-t p values agree with quadrature across dof") {
  for (int dof : {1, 2, 4, 9, 30}) {
    for (double t : {0.0, 0.7, 1.3, 2.8, 5.0}) {
      const double p = student_t_two_sided_p(t, dof);
      const double ref = oracles::student_t_two_sided_p_reference(t, dof);
      CHECK(std::abs(p - ref) < 1e-9);
    }
  }
}
