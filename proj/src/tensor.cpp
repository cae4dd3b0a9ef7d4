// Copyright 2026 The hetpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetpred/tensor.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace hetpred::ad
{

std::size_t shape_size(const Shape & shape)
{
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape & shape)
{
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) {
      os << 'x';
    }
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), values_(shape_size(shape_), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
: shape_(std::move(shape)), values_(std::move(values))
{
  if (shape_size(shape_) != values_.size()) {
    throw DimensionError(
      "tensor shape " + shape_string(shape_) + " does not match " +
      std::to_string(values_.size()) + " values");
  }
}

Tensor Tensor::scalar(double value) { return Tensor(Shape{}, {value}); }

Tensor Tensor::vector(std::vector<double> values)
{
  const std::size_t n = values.size();
  return Tensor(Shape{n}, std::move(values));
}

Tensor Tensor::vector(std::initializer_list<double> values)
{
  return vector(std::vector<double>(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
{
  return Tensor(Shape{rows, cols}, std::move(values));
}

Tensor Tensor::identity(std::size_t n)
{
  Tensor t(Shape{n, n});
  for (std::size_t i = 0; i < n; ++i) {
    t.at(i, i) = 1.0;
  }
  return t;
}

std::size_t Tensor::rows() const
{
  if (rank() != 2) {
    throw DimensionError("rows() on tensor of shape " + shape_string(shape_));
  }
  return shape_[0];
}

std::size_t Tensor::cols() const
{
  if (rank() != 2) {
    throw DimensionError("cols() on tensor of shape " + shape_string(shape_));
  }
  return shape_[1];
}

double Tensor::item() const
{
  if (values_.size() != 1) {
    throw DimensionError("item() on tensor of shape " + shape_string(shape_));
  }
  return values_[0];
}

bool Tensor::all_finite() const
{
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void Tensor::add_in_place(const Tensor & other)
{
  if (other.shape_ != shape_) {
    throw DimensionError(
      "add_in_place: " + shape_string(shape_) + " vs " + shape_string(other.shape_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += other.values_[i];
  }
}

}  // namespace hetpred::ad
