// Test-side reference implementations, kept independent of the library's
// computation paths on purpose.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bridgeseg/image.hpp"
#include "bridgeseg/rng.hpp"
#include "bridgeseg/tensor.hpp"

namespace oracles {

// SSIM by brute force: per-pixel Gaussian-window statistics computed with
// direct nested loops (no separable filtering), windows fully inside.
inline double ssim_reference(const bridgeseg::Tensor& x, const bridgeseg::Tensor& y, int window,
                             double sigma, double k1, double k2, double dynamic_range) {
  const int h = x.dim(0), w = x.dim(1);
  const int r = window / 2;
  const double c1 = (k1 * dynamic_range) * (k1 * dynamic_range);
  const double c2 = (k2 * dynamic_range) * (k2 * dynamic_range);

  std::vector<double> kern(static_cast<std::size_t>(window) * window);
  double ksum = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double v = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
      kern[static_cast<std::size_t>(dy + r) * window + (dx + r)] = v;
      ksum += v;
    }
  }
  for (double& v : kern) v /= ksum;

  double acc = 0.0;
  int count = 0;
  for (int cy = r; cy < h - r; ++cy) {
    for (int cx = r; cx < w - r; ++cx) {
      double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const double kv = kern[static_cast<std::size_t>(dy + r) * window + (dx + r)];
          const double xv = (x.at(cy + dy, cx + dx) + 1.0) * 0.5;
          const double yv = (y.at(cy + dy, cx + dx) + 1.0) * 0.5;
          mx += kv * xv;
          my += kv * yv;
          mxx += kv * xv * xv;
          myy += kv * yv * yv;
          mxy += kv * xv * yv;
        }
      }
      const double vx = mxx - mx * mx;
      const double vy = myy - my * my;
      const double cov = mxy - mx * my;
      acc += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return acc / count;
}

// Student-t density.
inline double student_t_pdf(double x, double dof) {
  const double v = dof;
  const double c = std::exp(std::lgamma((v + 1.0) / 2.0) - std::lgamma(v / 2.0)) / std::sqrt(v * M_PI);
  return c * std::pow(1.0 + x * x / v, -(v + 1.0) / 2.0);
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps,
                               int depth = 24) {
  const double c = (a + b) / 2.0;
  const double fa = f(a), fb = f(b), fc = f(c);
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double aa, double bb, double faa, double fbb, double fcc, double whole, double tol,
          int d) -> double {
    const double cc = (aa + bb) / 2.0;
    const double lc = (aa + cc) / 2.0, rc = (cc + bb) / 2.0;
    const double flc = f(lc), frc = f(rc);
    const double left = (cc - aa) / 6.0 * (faa + 4.0 * flc + fcc);
    const double right = (bb - cc) / 6.0 * (fcc + 4.0 * frc + fbb);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(aa, cc, faa, fcc, flc, left, tol / 2.0, d - 1) +
           rec(cc, bb, fcc, fbb, frc, right, tol / 2.0, d - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
  return rec(a, b, fa, fb, fc, whole, eps, depth);
}

// Two-sided Student-t p-value by numerical integration of the density.
inline double student_t_two_sided_p_reference(double t, int dof) {
  const double at = std::abs(t);
  const double central =
      adaptive_simpson([&](double x) { return student_t_pdf(x, dof); }, 0.0, at, 1e-13) * 2.0;
  return 1.0 - central;
}

// Paired t statistic straight from the textbook formula.
inline double paired_t_statistic_reference(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += xs[i] - ys[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - ys[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return mean / (sd / std::sqrt(static_cast<double>(n)));
}

// Central-difference gradient of f with respect to a flat parameter view.
inline double central_difference(const std::function<double()>& eval, double& param, double h) {
  const double saved = param;
  param = saved + h;
  const double fp = eval();
  param = saved - h;
  const double fm = eval();
  param = saved;
  return (fp - fm) / (2.0 * h);
}

// Relative error with an absolute floor for near-zero gradients.
inline double rel_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline bridgeseg::LabelMask random_mask(int h, int w, bridgeseg::Rng& rng, double fg_prob) {
  bridgeseg::LabelMask m = bridgeseg::LabelMask::zeros(h, w);
  for (auto& p : m.pixels) p = rng.uniform() < fg_prob ? 1 : 0;
  return m;
}

}  // namespace oracles
