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

#ifndef FAPLEARN_GRADCHECK_HPP
#define FAPLEARN_GRADCHECK_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "faplearn/tensor.hpp"

namespace faplearn::numeric {

struct GradCheckOptions {
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  // Tensors larger than this are checked on a random coordinate sample.
  std::size_t samples_per_tensor = 32;
  // Denominator floor for the relative error, so coordinates whose true
  // gradient is ~0 are judged on absolute error instead.
  double magnitude_floor = 1e-6;
  std::uint64_t seed = 1;
};

struct ParameterCheck {
  std::string name;
  std::size_t coordinates = 0;
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  bool passed = true;
};

struct GradCheckReport {
  std::vector<ParameterCheck> parameters;
  double max_relative_error = 0.0;
  bool passed = true;
};

// `loss(with_grad)` rebuilds the computation from the current parameter
// values and returns the scalar loss; when `with_grad` is true it must also
// run backward so that each Parameter::grad holds dLoss/dParameter.
using LossFunction = std::function<double(bool with_grad)>;

// Compares analytic gradients with (f(x+eps) - f(x-eps)) / 2eps.
GradCheckReport grad_check(const LossFunction& loss, std::span<Parameter* const> params,
                           const GradCheckOptions& options = {});

}  // namespace faplearn::numeric

#endif  // FAPLEARN_GRADCHECK_HPP
