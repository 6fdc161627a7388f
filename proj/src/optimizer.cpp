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

#include "faplearn/optimizer.hpp"

#include <cmath>

#include "faplearn/error.hpp"

namespace faplearn {

void adam_step(std::span<Parameter* const> params, AdamState& state, double lr, const AdamOptions& options) {
  if (state.m.empty()) {
    for (const Parameter* p : params) {
      state.m.push_back(Tensor::zeros_like(p->value));
      state.v.push_back(Tensor::zeros_like(p->value));
    }
  }
  if (state.m.size() != params.size()) throw ShapeMismatch("adam: state does not match parameter list");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(options.beta1, t);
  const double c2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    Tensor& m = state.m[i];
    Tensor& v = state.v[i];
    if (!m.same_shape(p.value) || !p.grad.same_shape(p.value)) throw ShapeMismatch("adam: " + p.name);
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double g = p.grad[j];
      m[j] = options.beta1 * m[j] + (1.0 - options.beta1) * g;
      v[j] = options.beta2 * v[j] + (1.0 - options.beta2) * g * g;
      const double mh = m[j] / c1;
      const double vh = v[j] / c2;
      p.value[j] -= lr * mh / (std::sqrt(vh) + options.epsilon);
    }
  }
}

void sgd_step(std::span<Parameter* const> params, double lr) {
  for (Parameter* p : params) {
    for (std::size_t j = 0; j < p->value.size(); ++j) p->value[j] -= lr * p->grad[j];
  }
}

double grad_norm(std::span<Parameter* const> params) {
  double s = 0.0;
  for (const Parameter* p : params) {
    for (double g : p->grad.data()) s += g * g;
  }
  return std::sqrt(s);
}

double clip_grad_norm(std::span<Parameter* const> params, double max_norm) {
  const double norm = grad_norm(params);
  if (max_norm > 0.0 && norm > max_norm) {
    const double f = max_norm / norm;
    for (Parameter* p : params) {
      for (double& g : p->grad.data()) g *= f;
    }
  }
  return norm;
}

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

}  // namespace faplearn
