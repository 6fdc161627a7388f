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

#include "faplearn/tape.hpp"

#include "faplearn/error.hpp"

namespace faplearn::numeric {

Tape::Node& Tape::node(Var v) {
  if (!v.valid() || v.id() >= nodes_.size()) throw NumericError("tape: invalid variable");
  return nodes_[v.id()];
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id() >= nodes_.size()) throw NumericError("tape: invalid variable");
  return nodes_[v.id()];
}

Var Tape::constant(Tensor value) {
  if (!value.all_finite()) throw NonFiniteValue("tape: non-finite constant");
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::parameter(Parameter& p, bool trainable) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return it->second;
  Node n;
  n.param = &p;
  n.requires_grad = grad_enabled_ && trainable;
  nodes_.push_back(std::move(n));
  Var v(static_cast<std::uint32_t>(nodes_.size() - 1));
  param_nodes_.emplace(&p, v);
  return v;
}

Var Tape::record(Tensor value, bool requires_grad, Backward backward) {
  if (!value.all_finite()) throw NonFiniteValue("tape: operation produced NaN/Inf");
  Node n;
  n.value = std::move(value);
  n.requires_grad = grad_enabled_ && requires_grad;
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(static_cast<std::uint32_t>(nodes_.size() - 1));
}

const Tensor& Tape::value(Var v) const {
  const Node& n = node(v);
  return n.param ? n.param->value : n.value;
}

bool Tape::requires_grad(Var v) const { return node(v).requires_grad; }

Tensor& Tape::grad(Var v) {
  Node& n = node(v);
  if (n.param) return n.param->grad;
  if (n.grad.empty() && !n.value.empty()) n.grad = Tensor::zeros_like(n.value);
  return n.grad;
}

bool Tape::has_grad(Var v) const {
  const Node& n = node(v);
  return n.param ? true : !n.grad.empty();
}

void Tape::backward(Var loss) {
  if (value(loss).size() != 1) {
    throw NonScalarLoss("backward: loss has shape " + value(loss).shape_string());
  }
  for (auto& n : nodes_) {
    if (!n.param) n.grad = Tensor();
  }
  if (!node(loss).requires_grad) return;
  grad(loss)[0] += 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
    n.backward(*this, n.grad);
  }
}

void Tape::clear() {
  nodes_.clear();
  param_nodes_.clear();
}

}  // namespace faplearn::numeric
