#pragma once

#include <string>
#include <vector>

#include "bridgeseg/rng.hpp"
#include "bridgeseg/tensor.hpp"

namespace bridgeseg::nn {

// Named parameter with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, std::vector<int> shape)
      : name(std::move(n)), value(shape), grad(std::move(shape)) {}

  void zero_grad() { grad.zero(); }
};

using ParamRefs = std::vector<Parameter*>;

// Seeded per-parameter initialization; streams are keyed by parameter
// name so results do not depend on construction order.
void init_gaussian(Parameter& p, std::uint64_t seed, double stddev);
void init_kaiming(Parameter& p, std::uint64_t seed, int fan_in);
void init_constant(Parameter& p, double value);

// Every layer keeps a stack of forward caches: forward(x, cache=true)
// pushes one entry, backward pops the most recent. This makes repeated
// applications of a weight-shared layer (recurrent blocks, chained
// steps) safe as long as backward calls mirror forwards in LIFO order.
// forward(x, cache=false) runs inference-only and leaves no state behind.

class Conv2d {
 public:
  Conv2d(std::string name, int in_ch, int out_ch, int ksize, int stride, int pad);

  Tensor forward(const Tensor& x, bool cache);
  // Returns d_input; accumulates weight/bias gradients unless
  // accumulate=false.
  Tensor backward(const Tensor& dy, bool accumulate = true);

  void collect(ParamRefs& out);
  int out_side(int in_side) const { return (in_side + 2 * pad_ - ksize_) / stride_ + 1; }
  int in_channels() const { return in_ch_; }
  int out_channels() const { return out_ch_; }

  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }

 private:
  Tensor im2col(const Tensor& x, int oh, int ow) const;
  void col2im_add(const Tensor& cols, Tensor& dx, int oh, int ow) const;

  int in_ch_, out_ch_, ksize_, stride_, pad_;
  Parameter weight_;  // (out_ch, in_ch * k * k), row-major
  Parameter bias_;    // (out_ch)
  std::vector<Tensor> x_stack_;
};

class InstanceNorm2d {
 public:
  InstanceNorm2d(std::string name, int channels, double eps = 1e-5);

  Tensor forward(const Tensor& x, bool cache);
  Tensor backward(const Tensor& dy, bool accumulate = true);
  void collect(ParamRefs& out);

 private:
  int channels_;
  double eps_;
  Parameter gamma_, beta_;
  struct Cache {
    Tensor xhat;
    std::vector<double> inv_std;
  };
  std::vector<Cache> stack_;
};

class Relu {
 public:
  Tensor forward(const Tensor& x, bool cache);
  Tensor backward(const Tensor& dy);

 private:
  std::vector<Tensor> out_stack_;
};

class LeakyRelu {
 public:
  explicit LeakyRelu(double slope = 0.2) : slope_(slope) {}
  Tensor forward(const Tensor& x, bool cache);
  Tensor backward(const Tensor& dy);

 private:
  double slope_;
  std::vector<Tensor> in_stack_;
};

class Tanh {
 public:
  Tensor forward(const Tensor& x, bool cache);
  Tensor backward(const Tensor& dy);

 private:
  std::vector<Tensor> out_stack_;
};

class Sigmoid {
 public:
  Tensor forward(const Tensor& x, bool cache);
  Tensor backward(const Tensor& dy);

 private:
  std::vector<Tensor> out_stack_;
};

// Inverted dropout; the mask comes from the caller's RNG stream.
class Dropout {
 public:
  explicit Dropout(double rate) : rate_(rate) {}
  Tensor forward(const Tensor& x, bool active, Rng& rng, bool cache);
  Tensor backward(const Tensor& dy);
  double rate() const { return rate_; }
  void set_rate(double r) { rate_ = r; }

 private:
  double rate_;
  std::vector<Tensor> mask_stack_;
};

class Linear {
 public:
  Linear(std::string name, int in_dim, int out_dim);
  Tensor forward(const Tensor& x, bool cache);  // rank-1 in, rank-1 out
  Tensor backward(const Tensor& dy, bool accumulate = true);
  void collect(ParamRefs& out);
  Parameter& weight() { return weight_; }

 private:
  int in_dim_, out_dim_;
  Parameter weight_;  // (out, in)
  Parameter bias_;    // (out)
  std::vector<Tensor> x_stack_;
};

// Nearest-neighbour 2x upsampling.
class Upsample2x {
 public:
  Tensor forward(const Tensor& x, bool cache);
  Tensor backward(const Tensor& dy);

 private:
  std::vector<std::vector<int>> shape_stack_;
};

// 2x2 stride-2 max pooling; ties resolve to the first element in scan
// order.
class MaxPool2d {
 public:
  Tensor forward(const Tensor& x, bool cache);
  Tensor backward(const Tensor& dy);

 private:
  struct Cache {
    std::vector<int> argmax;  // flat input index per output element
    std::vector<int> in_shape;
  };
  std::vector<Cache> stack_;
};

// Channel concatenation [a; b] and its adjoint.
Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& dy, int a_channels, Tensor& da, Tensor& db);

// Adds a per-channel bias vector (rank-1, length C) to a (C,H,W) map.
Tensor add_channel_bias(const Tensor& x, const Tensor& bias);
// Adjoint of add_channel_bias with respect to the bias.
Tensor channel_bias_grad(const Tensor& dy);

}  // namespace bridgeseg::nn
