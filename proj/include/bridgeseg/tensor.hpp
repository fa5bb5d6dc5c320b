#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace bridgeseg {

// Dense row-major tensor of doubles. Rank is 1..3; image feature maps use
// (channels, height, width) order.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);
  Tensor(std::initializer_list<int> shape) : Tensor(std::vector<int>(shape)) {}

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int> shape, double value);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  // (c, y, x) accessor for rank-3 tensors.
  double& at(int c, int y, int x) {
    return data_[(static_cast<std::size_t>(c) * shape_[1] + y) * shape_[2] + x];
  }
  double at(int c, int y, int x) const {
    return data_[(static_cast<std::size_t>(c) * shape_[1] + y) * shape_[2] + x];
  }

  // (y, x) accessor for rank-2 tensors.
  double& at(int y, int x) { return data_[static_cast<std::size_t>(y) * shape_[1] + x]; }
  double at(int y, int x) const { return data_[static_cast<std::size_t>(y) * shape_[1] + x]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  void fill(double value);
  void zero() { fill(0.0); }

  // In-place elementwise updates.
  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);

  bool all_finite() const;
  double min() const;
  double max() const;
  double mean() const;

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(Tensor a, double s);

// Mean of squared elementwise differences.
double mean_squared_diff(const Tensor& a, const Tensor& b);

}  // namespace bridgeseg
