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

#ifndef FAPLEARN_OPTIMIZER_HPP
#define FAPLEARN_OPTIMIZER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "faplearn/tensor.hpp"

namespace faplearn {

using numeric::Parameter;
using numeric::Tensor;

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First and second moments per parameter plus the step count.
struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t step = 0;
};

// One bias-corrected Adam update of every parameter from its grad.
void adam_step(std::span<Parameter* const> params, AdamState& state, double lr,
               const AdamOptions& options = {});

// p -= lr * grad.
void sgd_step(std::span<Parameter* const> params, double lr);

double grad_norm(std::span<Parameter* const> params);
// Rescales all grads so their joint L2 norm is at most max_norm. Returns the
// norm before clipping. max_norm <= 0 disables clipping.
double clip_grad_norm(std::span<Parameter* const> params, double max_norm);

void zero_grads(std::span<Parameter* const> params);

}  // namespace faplearn

#endif  // FAPLEARN_OPTIMIZER_HPP
