#include "bridgeseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bridgeseg/errors.hpp"

namespace bridgeseg {

namespace {

struct Overlap {
  std::int64_t intersection = 0;
  std::int64_t a_count = 0;
  std::int64_t b_count = 0;
};

Overlap overlap(const LabelMask& a, const LabelMask& b) {
  if (!a.same_shape(b)) throw ArgumentError("mask shape mismatch");
  Overlap o;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    o.intersection += a.pixels[i] & b.pixels[i];
    o.a_count += a.pixels[i];
    o.b_count += b.pixels[i];
  }
  return o;
}

std::vector<double> gaussian_kernel(int window, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(window));
  const double c = (window - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < window; ++i) {
    k[static_cast<std::size_t>(i)] = std::exp(-0.5 * (i - c) * (i - c) / (sigma * sigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Average ranks, ties averaged.
std::vector<double> ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double dice(const LabelMask& a, const LabelMask& b) {
  const Overlap o = overlap(a, b);
  if (o.a_count + o.b_count == 0) return 1.0;
  return 2.0 * static_cast<double>(o.intersection) / static_cast<double>(o.a_count + o.b_count);
}

double iou(const LabelMask& a, const LabelMask& b) {
  const Overlap o = overlap(a, b);
  const std::int64_t uni = o.a_count + o.b_count - o.intersection;
  if (uni == 0) return 1.0;
  return static_cast<double>(o.intersection) / static_cast<double>(uni);
}

double mse(const Tensor& x, const Tensor& y) { return mean_squared_diff(x, y); }

double ssim(const Tensor& x, const Tensor& y, const SsimConfig& cfg) {
  if (!x.same_shape(y)) throw ArgumentError("ssim: image shape mismatch");
  if (x.rank() != 2) throw ArgumentError("ssim: expects rank-2 images");
  const int h = x.dim(0), w = x.dim(1);
  if (cfg.window < 1 || cfg.window % 2 == 0) throw ArgumentError("ssim: window must be odd and positive");
  if (h < cfg.window || w < cfg.window) throw ArgumentError("ssim: image smaller than window");

  // Rescale [-1, 1] -> [0, 1].
  Tensor xs({h, w}), ys({h, w});
  for (std::int64_t i = 0; i < x.size(); ++i) {
    xs[i] = (x[i] + 1.0) * 0.5;
    ys[i] = (y[i] + 1.0) * 0.5;
  }

  const auto kernel = gaussian_kernel(cfg.window, cfg.sigma);
  const double c1 = cfg.k1 * cfg.dynamic_range * cfg.k1 * cfg.dynamic_range;
  const double c2 = cfg.k2 * cfg.dynamic_range * cfg.k2 * cfg.dynamic_range;

  // Separable Gaussian filtering of x, y, x^2, y^2 and x*y over the
  // fully-inside window positions.
  const int r = cfg.window / 2;
  const int oh = h - 2 * r, ow = w - 2 * r;
  auto filter = [&](auto&& value_at) {
    // Horizontal pass on full rows, vertical pass on valid rows.
    Tensor tmp({h, ow});
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < ow; ++xx) {
        double acc = 0.0;
        for (int k = 0; k < cfg.window; ++k) acc += kernel[static_cast<std::size_t>(k)] * value_at(yy, xx + k);
        tmp.at(yy, xx) = acc;
      }
    }
    Tensor out({oh, ow});
    for (int yy = 0; yy < oh; ++yy) {
      for (int xx = 0; xx < ow; ++xx) {
        double acc = 0.0;
        for (int k = 0; k < cfg.window; ++k) acc += kernel[static_cast<std::size_t>(k)] * tmp.at(yy + k, xx);
        out.at(yy, xx) = acc;
      }
    }
    return out;
  };

  const Tensor mu_x = filter([&](int yy, int xx) { return xs.at(yy, xx); });
  const Tensor mu_y = filter([&](int yy, int xx) { return ys.at(yy, xx); });
  const Tensor m_xx = filter([&](int yy, int xx) { return xs.at(yy, xx) * xs.at(yy, xx); });
  const Tensor m_yy = filter([&](int yy, int xx) { return ys.at(yy, xx) * ys.at(yy, xx); });
  const Tensor m_xy = filter([&](int yy, int xx) { return xs.at(yy, xx) * ys.at(yy, xx); });

  double acc = 0.0;
  for (std::int64_t i = 0; i < mu_x.size(); ++i) {
    const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
    const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
    const double cov = m_xy[i] - mu_x[i] * mu_y[i];
    const double num = (2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2);
    const double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2);
    acc += num / den;
  }
  return acc / static_cast<double>(mu_x.size());
}

double dice3d(const std::vector<LabelMask>& pred_slices, const std::vector<LabelMask>& ref_slices) {
  if (pred_slices.size() != ref_slices.size()) {
    throw ArgumentError("dice3d: slice count mismatch (" + std::to_string(pred_slices.size()) + " vs " +
                        std::to_string(ref_slices.size()) + ")");
  }
  if (pred_slices.empty()) throw ArgumentError("dice3d: empty volumes");
  std::int64_t inter = 0, total = 0;
  for (std::size_t i = 0; i < pred_slices.size(); ++i) {
    const Overlap o = overlap(pred_slices[i], ref_slices[i]);
    inter += o.intersection;
    total += o.a_count + o.b_count;
  }
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(total);
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ArgumentError("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw ArgumentError("pearson: need at least 3 samples");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateInputError("pearson: zero variance in input series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ArgumentError("spearman: length mismatch");
  return pearson(ranks(xs), ranks(ys));
}

// Continued-fraction evaluation (modified Lentz) of the regularized
// incomplete beta function.
double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw ArgumentError("incomplete_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw ArgumentError("incomplete_beta: x must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double ln_front = a * std::log(x) + b * std::log1p(-x) - std::log(a) -
                          (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));

  auto contfrac = [](double aa, double bb, double xx) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    double c = 1.0;
    double d = 1.0 - (aa + bb) * xx / (aa + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double f = d;
    for (int m = 1; m <= 400; ++m) {
      const double md = static_cast<double>(m);
      double num = md * (bb - md) * xx / ((aa + 2.0 * md - 1.0) * (aa + 2.0 * md));
      d = 1.0 + num * d;
      if (std::abs(d) < tiny) d = tiny;
      c = 1.0 + num / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      f *= c * d;
      num = -(aa + md) * (aa + bb + md) * xx / ((aa + 2.0 * md) * (aa + 2.0 * md + 1.0));
      d = 1.0 + num * d;
      if (std::abs(d) < tiny) d = tiny;
      c = 1.0 + num / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const double delta = c * d;
      f *= delta;
      if (std::abs(delta - 1.0) < eps) break;
    }
    return f;
  };

  // Symmetry transform keeps the continued fraction in its fast-converging
  // region.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(ln_front) * contfrac(a, b, x);
  }
  const double ln_front_c = b * std::log1p(-x) + a * std::log(x) - std::log(b) -
                            (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  return 1.0 - std::exp(ln_front_c) * contfrac(b, a, 1.0 - x);
}

double student_t_two_sided_p(double t, int dof) {
  if (dof < 1) throw ArgumentError("student_t_two_sided_p: dof must be >= 1");
  const double v = static_cast<double>(dof);
  const double x = v / (v + t * t);
  return incomplete_beta(v / 2.0, 0.5, x);
}

TTestResult paired_ttest(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ArgumentError("paired_ttest: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw ArgumentError("paired_ttest: need at least 2 pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = xs[i] - ys[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  if (ss == 0.0) {
    throw DegenerateInputError("paired_ttest: differences have zero variance");
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  TTestResult r;
  r.dof = static_cast<int>(n) - 1;
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  r.p = student_t_two_sided_p(r.t, r.dof);
  return r;
}

}  // namespace bridgeseg
