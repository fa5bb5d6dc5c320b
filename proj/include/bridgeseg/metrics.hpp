#pragma once

#include <vector>

#include "bridgeseg/image.hpp"
#include "bridgeseg/tensor.hpp"

namespace bridgeseg {

// Dice similarity coefficient 2|A∩B| / (|A| + |B|); two empty masks score 1.
double dice(const LabelMask& a, const LabelMask& b);

// Intersection over union |A∩B| / |A∪B|; two empty masks score 1.
// For binary masks, iou == dice / (2 - dice).
double iou(const LabelMask& a, const LabelMask& b);

// Mean squared error between two equally shaped images.
double mse(const Tensor& x, const Tensor& y);

struct SsimConfig {
  int window = 7;          // Gaussian window side length (odd)
  double sigma = 1.5;      // Gaussian window stddev
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;  // after rescaling [-1,1] -> [0,1]
};

// Structural similarity with a Gaussian window. Inputs in [-1, 1] are
// rescaled internally to [0, 1]; local statistics use windows fully
// inside the image and the mean is taken over those positions.
double ssim(const Tensor& x, const Tensor& y, const SsimConfig& config = {});

// Dice over stacked volumes: per-slice intersections and foreground
// sizes are pooled before the ratio, which differs from averaging
// per-slice Dice scores.
double dice3d(const std::vector<LabelMask>& pred_slices, const std::vector<LabelMask>& ref_slices);

// Pearson correlation; requires length >= 3 and nonzero variance in both
// series (throws DegenerateInputError otherwise).
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;   // two-sided
  int dof = 0;
};

// Two-sided paired-sample t-test on xs[i] - ys[i]. Throws
// DegenerateInputError when the differences have zero variance.
TTestResult paired_ttest(const std::vector<double>& xs, const std::vector<double>& ys);

// Regularized incomplete beta function I_x(a, b); exposed for the
// statistics implementation and its tests.
double incomplete_beta(double a, double b, double x);

// Student-t two-sided tail probability for |t| with the given degrees of
// freedom.
double student_t_two_sided_p(double t, int dof);

}  // namespace bridgeseg
