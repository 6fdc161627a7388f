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

#include "faplearn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "faplearn/rng.hpp"

namespace faplearn::numeric {

GradCheckReport grad_check(const LossFunction& loss, std::span<Parameter* const> params,
                           const GradCheckOptions& options) {
  for (Parameter* p : params) p->zero_grad();
  loss(true);
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  Rng rng(options.seed);
  GradCheckReport report;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    std::vector<std::size_t> coords(p.value.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (coords.size() > options.samples_per_tensor) {
      rng.shuffle(std::span(coords));
      coords.resize(options.samples_per_tensor);
      std::sort(coords.begin(), coords.end());
    }

    ParameterCheck check;
    check.name = p.name;
    check.coordinates = coords.size();
    bool first = true;
    for (std::size_t idx : coords) {
      const double original = p.value[idx];
      p.value[idx] = original + options.epsilon;
      const double up = loss(false);
      p.value[idx] = original - options.epsilon;
      const double down = loss(false);
      p.value[idx] = original;

      const double numeric = (up - down) / (2.0 * options.epsilon);
      const double exact = analytic[pi][idx];
      const double denom = std::max({std::abs(exact), std::abs(numeric), options.magnitude_floor});
      const double rel = std::abs(exact - numeric) / denom;
      if (first || rel > check.max_relative_error) {
        first = false;
        check.max_relative_error = rel;
        check.worst_index = idx;
        check.analytic = exact;
        check.numeric = numeric;
      }
    }
    check.passed = check.max_relative_error < options.tolerance;
    report.max_relative_error = std::max(report.max_relative_error, check.max_relative_error);
    report.passed = report.passed && check.passed;
    report.parameters.push_back(std::move(check));
  }
  for (Parameter* p : params) p->zero_grad();
  return report;
}

}  // namespace faplearn::numeric
