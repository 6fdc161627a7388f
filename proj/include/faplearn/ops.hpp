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

#ifndef FAPLEARN_OPS_HPP
#define FAPLEARN_OPS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "faplearn/tape.hpp"
#include "faplearn/tensor.hpp"

namespace faplearn::numeric {

inline constexpr double kLogClamp = 1e-12;

// Plain (non-recording) forms.
Tensor matmul(const Tensor& a, const Tensor& b);
// Row-wise, max-shifted. Throws NonFiniteValue on NaN/Inf input.
Tensor softmax(const Tensor& logits);
// -log q[target], q clamped below at kLogClamp. q must be a distribution.
double cross_entropy(std::size_t target, std::span<const double> q);
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Recording forms. Each appends one node to the tape.
Var matmul(Tape& t, Var a, Var b);
Var add(Tape& t, Var a, Var b);
Var mul(Tape& t, Var a, Var b);
Var sigmoid(Tape& t, Var a);
Var tanh(Tape& t, Var a);
Var one_minus(Tape& t, Var a);
Var scale(Tape& t, Var a, double factor);

enum class Elementwise { add, mul, sigmoid, tanh, one_minus };
Var elementwise(Tape& t, Elementwise kind, Var a, Var b = Var());

// x (m x n) + bias (length n) broadcast over rows.
Var add_bias(Tape& t, Var x, Var bias);
// Sum of all entries, as a length-1 tensor.
Var sum(Tape& t, Var a);
// Rows of `table` picked by `indices`; result is (indices.size() x cols).
Var gather_rows(Tape& t, Var table, std::span<const std::uint32_t> indices);
// [a | b] for matrices with equal row counts.
Var concat_cols(Tape& t, Var a, Var b);
Var softmax(Tape& t, Var logits);

// Sum over rows r with weight[r] != 0 of weight[r] * -log q[r, target[r]],
// where q holds one distribution per row. Empty `weights` means all ones.
Var cross_entropy(Tape& t, Var probs, std::span<const std::uint32_t> targets,
                  std::span<const double> weights = {});
// Same value as cross_entropy(softmax(logits)), as one node.
Var softmax_cross_entropy(Tape& t, Var logits, std::span<const std::uint32_t> targets,
                          std::span<const double> weights = {});

}  // namespace faplearn::numeric

#endif  // FAPLEARN_OPS_HPP
