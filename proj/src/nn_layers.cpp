#include "bridgeseg/nn/layers.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "bridgeseg/errors.hpp"

namespace bridgeseg::nn {

using MatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void init_gaussian(Parameter& p, std::uint64_t seed, double stddev) {
  Rng rng(derive_seed(seed, {hash_tag(p.name)}));
  for (std::int64_t i = 0; i < p.value.size(); ++i) p.value[i] = stddev * rng.normal();
}

void init_kaiming(Parameter& p, std::uint64_t seed, int fan_in) {
  init_gaussian(p, seed, std::sqrt(2.0 / static_cast<double>(fan_in)));
}

void init_constant(Parameter& p, double value) { p.value.fill(value); }

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(std::string name, int in_ch, int out_ch, int ksize, int stride, int pad)
    : in_ch_(in_ch),
      out_ch_(out_ch),
      ksize_(ksize),
      stride_(stride),
      pad_(pad),
      weight_(name + ".weight", {out_ch, in_ch * ksize * ksize}),
      bias_(name + ".bias", {out_ch}) {
  if (in_ch < 1 || out_ch < 1 || ksize < 1 || stride < 1 || pad < 0) {
    throw ArgumentError("Conv2d: invalid configuration for " + name);
  }
}

Tensor Conv2d::im2col(const Tensor& x, int oh, int ow) const {
  const int h = x.dim(1), w = x.dim(2);
  Tensor cols({in_ch_ * ksize_ * ksize_, oh * ow});
  double* dst = cols.data();
  for (int c = 0; c < in_ch_; ++c) {
    for (int ky = 0; ky < ksize_; ++ky) {
      for (int kx = 0; kx < ksize_; ++kx) {
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride_ - pad_ + ky;
          const bool row_ok = iy >= 0 && iy < h;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride_ - pad_ + kx;
            *dst++ = (row_ok && ix >= 0 && ix < w) ? x.at(c, iy, ix) : 0.0;
          }
        }
      }
    }
  }
  return cols;
}

void Conv2d::col2im_add(const Tensor& cols, Tensor& dx, int oh, int ow) const {
  const int h = dx.dim(1), w = dx.dim(2);
  const double* src = cols.data();
  for (int c = 0; c < in_ch_; ++c) {
    for (int ky = 0; ky < ksize_; ++ky) {
      for (int kx = 0; kx < ksize_; ++kx) {
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride_ - pad_ + ky;
          const bool row_ok = iy >= 0 && iy < h;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride_ - pad_ + kx;
            if (row_ok && ix >= 0 && ix < w) dx.at(c, iy, ix) += *src;
            ++src;
          }
        }
      }
    }
  }
}

Tensor Conv2d::forward(const Tensor& x, bool cache) {
  if (x.rank() != 3 || x.dim(0) != in_ch_) {
    throw ArgumentError(weight_.name + ": expected input with " + std::to_string(in_ch_) +
                        " channels");
  }
  const int oh = out_side(x.dim(1)), ow = out_side(x.dim(2));
  if (oh < 1 || ow < 1) throw ArgumentError(weight_.name + ": input too small for kernel");
  const Tensor cols = im2col(x, oh, ow);

  Tensor y({out_ch_, oh, ow});
  ConstMatMap w_map(weight_.value.data(), out_ch_, in_ch_ * ksize_ * ksize_);
  ConstMatMap c_map(cols.data(), cols.dim(0), cols.dim(1));
  MatMap y_map(y.data(), out_ch_, oh * ow);
  y_map.noalias() = w_map * c_map;
  for (int c = 0; c < out_ch_; ++c) y_map.row(c).array() += bias_.value[c];

  if (cache) x_stack_.push_back(x);
  return y;
}

Tensor Conv2d::backward(const Tensor& dy, bool accumulate) {
  if (x_stack_.empty()) throw NumericError(weight_.name + ": backward without cached forward");
  const Tensor x = std::move(x_stack_.back());
  x_stack_.pop_back();

  const int oh = dy.dim(1), ow = dy.dim(2);
  const Tensor cols = im2col(x, oh, ow);
  ConstMatMap dy_map(dy.data(), out_ch_, oh * ow);
  ConstMatMap c_map(cols.data(), cols.dim(0), cols.dim(1));
  ConstMatMap w_map(weight_.value.data(), out_ch_, in_ch_ * ksize_ * ksize_);

  if (accumulate) {
    MatMap dw_map(weight_.grad.data(), out_ch_, in_ch_ * ksize_ * ksize_);
    dw_map.noalias() += dy_map * c_map.transpose();
    for (int c = 0; c < out_ch_; ++c) bias_.grad[c] += dy_map.row(c).sum();
  }

  Tensor dcols({in_ch_ * ksize_ * ksize_, oh * ow});
  MatMap dc_map(dcols.data(), dcols.dim(0), dcols.dim(1));
  dc_map.noalias() = w_map.transpose() * dy_map;

  Tensor dx({in_ch_, x.dim(1), x.dim(2)});
  col2im_add(dcols, dx, oh, ow);
  return dx;
}

void Conv2d::collect(ParamRefs& out) {
  out.push_back(&weight_);
  out.push_back(&bias_);
}

// --------------------------------------------------------- InstanceNorm2d

InstanceNorm2d::InstanceNorm2d(std::string name, int channels, double eps)
    : channels_(channels),
      eps_(eps),
      gamma_(name + ".gamma", {channels}),
      beta_(name + ".beta", {channels}) {
  init_constant(gamma_, 1.0);
  init_constant(beta_, 0.0);
}

Tensor InstanceNorm2d::forward(const Tensor& x, bool cache) {
  if (x.rank() != 3 || x.dim(0) != channels_) {
    throw ArgumentError(gamma_.name + ": channel mismatch in instance norm");
  }
  const int hw = x.dim(1) * x.dim(2);
  Tensor y = x;
  Cache c;
  c.xhat = Tensor({channels_, x.dim(1), x.dim(2)});
  c.inv_std.resize(static_cast<std::size_t>(channels_));
  const double inv_hw = 1.0 / static_cast<double>(hw);
  for (int ch = 0; ch < channels_; ++ch) {
    const std::int64_t base = static_cast<std::int64_t>(ch) * hw;
    double mean = 0.0;
    for (int i = 0; i < hw; ++i) mean += x[base + i];
    mean *= inv_hw;
    double var = 0.0;
    for (int i = 0; i < hw; ++i) {
      const double d = x[base + i] - mean;
      var += d * d;
    }
    var *= inv_hw;
    const double inv_std = 1.0 / std::sqrt(var + eps_);
    c.inv_std[static_cast<std::size_t>(ch)] = inv_std;
    for (int i = 0; i < hw; ++i) {
      const double xh = (x[base + i] - mean) * inv_std;
      c.xhat[base + i] = xh;
      y[base + i] = gamma_.value[ch] * xh + beta_.value[ch];
    }
  }
  if (cache) stack_.push_back(std::move(c));
  return y;
}

Tensor InstanceNorm2d::backward(const Tensor& dy, bool accumulate) {
  if (stack_.empty()) throw NumericError(gamma_.name + ": backward without cached forward");
  Cache c = std::move(stack_.back());
  stack_.pop_back();

  const int hw = dy.dim(1) * dy.dim(2);
  const double inv_hw = 1.0 / static_cast<double>(hw);
  Tensor dx({channels_, dy.dim(1), dy.dim(2)});
  for (int ch = 0; ch < channels_; ++ch) {
    const std::int64_t base = static_cast<std::int64_t>(ch) * hw;
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int i = 0; i < hw; ++i) {
      sum_dy += dy[base + i];
      sum_dy_xhat += dy[base + i] * c.xhat[base + i];
    }
    if (accumulate) {
      beta_.grad[ch] += sum_dy;
      gamma_.grad[ch] += sum_dy_xhat;
    }
    const double g = gamma_.value[ch];
    const double inv_std = c.inv_std[static_cast<std::size_t>(ch)];
    const double mean_dy = sum_dy * inv_hw;
    const double mean_dy_xhat = sum_dy_xhat * inv_hw;
    for (int i = 0; i < hw; ++i) {
      dx[base + i] = g * inv_std * (dy[base + i] - mean_dy - c.xhat[base + i] * mean_dy_xhat);
    }
  }
  return dx;
}

void InstanceNorm2d::collect(ParamRefs& out) {
  out.push_back(&gamma_);
  out.push_back(&beta_);
}

// ----------------------------------------------------------- activations

Tensor Relu::forward(const Tensor& x, bool cache) {
  Tensor y = x;
  for (std::int64_t i = 0; i < y.size(); ++i) y[i] = y[i] > 0.0 ? y[i] : 0.0;
  if (cache) out_stack_.push_back(y);
  return y;
}

Tensor Relu::backward(const Tensor& dy) {
  if (out_stack_.empty()) throw NumericError("Relu: backward without cached forward");
  const Tensor out = std::move(out_stack_.back());
  out_stack_.pop_back();
  Tensor dx = dy;
  for (std::int64_t i = 0; i < dx.size(); ++i) {
    if (out[i] <= 0.0) dx[i] = 0.0;
  }
  return dx;
}

Tensor LeakyRelu::forward(const Tensor& x, bool cache) {
  Tensor y = x;
  for (std::int64_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0) y[i] *= slope_;
  }
  if (cache) in_stack_.push_back(x);
  return y;
}

Tensor LeakyRelu::backward(const Tensor& dy) {
  if (in_stack_.empty()) throw NumericError("LeakyRelu: backward without cached forward");
  const Tensor x = std::move(in_stack_.back());
  in_stack_.pop_back();
  Tensor dx = dy;
  for (std::int64_t i = 0; i < dx.size(); ++i) {
    if (x[i] < 0.0) dx[i] *= slope_;
  }
  return dx;
}

Tensor Tanh::forward(const Tensor& x, bool cache) {
  Tensor y = x;
  for (std::int64_t i = 0; i < y.size(); ++i) y[i] = std::tanh(y[i]);
  if (cache) out_stack_.push_back(y);
  return y;
}

Tensor Tanh::backward(const Tensor& dy) {
  if (out_stack_.empty()) throw NumericError("Tanh: backward without cached forward");
  const Tensor out = std::move(out_stack_.back());
  out_stack_.pop_back();
  Tensor dx = dy;
  for (std::int64_t i = 0; i < dx.size(); ++i) dx[i] *= 1.0 - out[i] * out[i];
  return dx;
}

Tensor Sigmoid::forward(const Tensor& x, bool cache) {
  Tensor y = x;
  for (std::int64_t i = 0; i < y.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-y[i]));
  if (cache) out_stack_.push_back(y);
  return y;
}

Tensor Sigmoid::backward(const Tensor& dy) {
  if (out_stack_.empty()) throw NumericError("Sigmoid: backward without cached forward");
  const Tensor out = std::move(out_stack_.back());
  out_stack_.pop_back();
  Tensor dx = dy;
  for (std::int64_t i = 0; i < dx.size(); ++i) dx[i] *= out[i] * (1.0 - out[i]);
  return dx;
}

// --------------------------------------------------------------- Dropout

Tensor Dropout::forward(const Tensor& x, bool active, Rng& rng, bool cache) {
  if (!active || rate_ == 0.0) {
    if (cache) mask_stack_.push_back(Tensor::full(x.shape(), 1.0));
    return x;
  }
  if (rate_ < 0.0 || rate_ >= 1.0) throw ArgumentError("Dropout: rate must be in [0, 1)");
  const double keep = 1.0 - rate_;
  const double scale = 1.0 / keep;
  Tensor mask(x.shape());
  for (std::int64_t i = 0; i < mask.size(); ++i) mask[i] = rng.uniform() < keep ? scale : 0.0;
  Tensor y = x;
  for (std::int64_t i = 0; i < y.size(); ++i) y[i] *= mask[i];
  if (cache) mask_stack_.push_back(std::move(mask));
  return y;
}

Tensor Dropout::backward(const Tensor& dy) {
  if (mask_stack_.empty()) throw NumericError("Dropout: backward without cached forward");
  const Tensor mask = std::move(mask_stack_.back());
  mask_stack_.pop_back();
  Tensor dx = dy;
  for (std::int64_t i = 0; i < dx.size(); ++i) dx[i] *= mask[i];
  return dx;
}

// ---------------------------------------------------------------- Linear

Linear::Linear(std::string name, int in_dim, int out_dim)
    : in_dim_(in_dim),
      out_dim_(out_dim),
      weight_(name + ".weight", {out_dim, in_dim}),
      bias_(name + ".bias", {out_dim}) {}

Tensor Linear::forward(const Tensor& x, bool cache) {
  if (x.rank() != 1 || x.dim(0) != in_dim_) {
    throw ArgumentError(weight_.name + ": linear input dimension mismatch");
  }
  Tensor y({out_dim_});
  for (int o = 0; o < out_dim_; ++o) {
    double acc = bias_.value[o];
    const std::int64_t base = static_cast<std::int64_t>(o) * in_dim_;
    for (int i = 0; i < in_dim_; ++i) acc += weight_.value[base + i] * x[i];
    y[o] = acc;
  }
  if (cache) x_stack_.push_back(x);
  return y;
}

Tensor Linear::backward(const Tensor& dy, bool accumulate) {
  if (x_stack_.empty()) throw NumericError(weight_.name + ": backward without cached forward");
  const Tensor x = std::move(x_stack_.back());
  x_stack_.pop_back();
  Tensor dx({in_dim_});
  for (int o = 0; o < out_dim_; ++o) {
    const std::int64_t base = static_cast<std::int64_t>(o) * in_dim_;
    if (accumulate) {
      bias_.grad[o] += dy[o];
      for (int i = 0; i < in_dim_; ++i) weight_.grad[base + i] += dy[o] * x[i];
    }
    for (int i = 0; i < in_dim_; ++i) dx[i] += weight_.value[base + i] * dy[o];
  }
  return dx;
}

void Linear::collect(ParamRefs& out) {
  out.push_back(&weight_);
  out.push_back(&bias_);
}

// ------------------------------------------------------------ Upsample2x

Tensor Upsample2x::forward(const Tensor& x, bool cache) {
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  Tensor y({c, 2 * h, 2 * w});
  for (int ch = 0; ch < c; ++ch) {
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) {
        const double v = x.at(ch, yy, xx);
        y.at(ch, 2 * yy, 2 * xx) = v;
        y.at(ch, 2 * yy, 2 * xx + 1) = v;
        y.at(ch, 2 * yy + 1, 2 * xx) = v;
        y.at(ch, 2 * yy + 1, 2 * xx + 1) = v;
      }
    }
  }
  if (cache) shape_stack_.push_back(x.shape());
  return y;
}

Tensor Upsample2x::backward(const Tensor& dy) {
  if (shape_stack_.empty()) throw NumericError("Upsample2x: backward without cached forward");
  const auto shape = std::move(shape_stack_.back());
  shape_stack_.pop_back();
  Tensor dx(shape);
  const int c = shape[0], h = shape[1], w = shape[2];
  for (int ch = 0; ch < c; ++ch) {
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) {
        dx.at(ch, yy, xx) = dy.at(ch, 2 * yy, 2 * xx) + dy.at(ch, 2 * yy, 2 * xx + 1) +
                            dy.at(ch, 2 * yy + 1, 2 * xx) + dy.at(ch, 2 * yy + 1, 2 * xx + 1);
      }
    }
  }
  return dx;
}

// ------------------------------------------------------------- MaxPool2d

Tensor MaxPool2d::forward(const Tensor& x, bool cache) {
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  if (h % 2 != 0 || w % 2 != 0) throw ArgumentError("MaxPool2d: spatial dims must be even");
  const int oh = h / 2, ow = w / 2;
  Tensor y({c, oh, ow});
  Cache cc;
  cc.in_shape = x.shape();
  cc.argmax.resize(static_cast<std::size_t>(c) * oh * ow);
  std::size_t oi = 0;
  for (int ch = 0; ch < c; ++ch) {
    for (int yy = 0; yy < oh; ++yy) {
      for (int xx = 0; xx < ow; ++xx) {
        double best = -std::numeric_limits<double>::infinity();
        int best_idx = -1;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const int iy = 2 * yy + dy, ix = 2 * xx + dx;
            const double v = x.at(ch, iy, ix);
            if (v > best) {
              best = v;
              best_idx = (ch * h + iy) * w + ix;
            }
          }
        }
        y.at(ch, yy, xx) = best;
        cc.argmax[oi++] = best_idx;
      }
    }
  }
  if (cache) stack_.push_back(std::move(cc));
  return y;
}

Tensor MaxPool2d::backward(const Tensor& dy) {
  if (stack_.empty()) throw NumericError("MaxPool2d: backward without cached forward");
  const Cache cc = std::move(stack_.back());
  stack_.pop_back();
  Tensor dx(cc.in_shape);
  for (std::size_t i = 0; i < cc.argmax.size(); ++i) {
    dx[cc.argmax[i]] += dy[static_cast<std::int64_t>(i)];
  }
  return dx;
}

// --------------------------------------------------------------- helpers

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2)) {
    throw ArgumentError("concat_channels: spatial shape mismatch");
  }
  Tensor y({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.data(), a.data() + a.size(), y.data());
  std::copy(b.data(), b.data() + b.size(), y.data() + a.size());
  return y;
}

void split_channels(const Tensor& dy, int a_channels, Tensor& da, Tensor& db) {
  const int h = dy.dim(1), w = dy.dim(2);
  da = Tensor({a_channels, h, w});
  db = Tensor({dy.dim(0) - a_channels, h, w});
  std::copy(dy.data(), dy.data() + da.size(), da.data());
  std::copy(dy.data() + da.size(), dy.data() + dy.size(), db.data());
}

Tensor add_channel_bias(const Tensor& x, const Tensor& bias) {
  if (bias.rank() != 1 || bias.dim(0) != x.dim(0)) {
    throw ArgumentError("add_channel_bias: bias length must equal channel count");
  }
  Tensor y = x;
  const int hw = x.dim(1) * x.dim(2);
  for (int c = 0; c < x.dim(0); ++c) {
    const std::int64_t base = static_cast<std::int64_t>(c) * hw;
    for (int i = 0; i < hw; ++i) y[base + i] += bias[c];
  }
  return y;
}

Tensor channel_bias_grad(const Tensor& dy) {
  Tensor g({dy.dim(0)});
  const int hw = dy.dim(1) * dy.dim(2);
  for (int c = 0; c < dy.dim(0); ++c) {
    const std::int64_t base = static_cast<std::int64_t>(c) * hw;
    double acc = 0.0;
    for (int i = 0; i < hw; ++i) acc += dy[base + i];
    g[c] = acc;
  }
  return g;
}

}  // namespace bridgeseg::nn
