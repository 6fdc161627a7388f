// Copyright 2026 The faplearn Authors. All Rights Reserved.
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

#include "faplearn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "faplearn/error.hpp"

namespace faplearn::numeric {

Tensor::Tensor(std::size_t n, double fill) : rank_(1), rows_(1), cols_(n), data_(n, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rank_(2), rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor Tensor::vector(std::vector<double> values) {
  Tensor t;
  t.cols_ = values.size();
  t.data_ = std::move(values);
  return t;
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  if (values.size() != rows * cols) throw ShapeMismatch("matrix: value count does not match shape");
  Tensor t(rows, cols);
  t.data_ = std::move(values);
  return t;
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  Tensor t(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeMismatch("matrix: ragged rows");
    for (double v : row) t.data_[i++] = v;
  }
  return t;
}

Tensor Tensor::zeros_like(const Tensor& t) {
  Tensor z = t;
  z.fill(0.0);
  return z;
}

std::vector<std::size_t> Tensor::shape() const {
  if (rank_ == 1) return {cols_};
  return {rows_, cols_};
}

std::string Tensor::shape_string() const {
  if (rank_ == 1) return std::to_string(cols_);
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Tensor::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

}  // namespace faplearn::numeric
