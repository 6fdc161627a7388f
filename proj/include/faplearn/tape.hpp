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

#ifndef FAPLEARN_TAPE_HPP
#define FAPLEARN_TAPE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>
#include <vector>

#include "faplearn/tensor.hpp"

namespace faplearn::numeric {

class Var {
 public:
  Var() = default;
  explicit Var(std::uint32_t id) : id_(id) {}
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != kInvalid; }
  bool operator==(const Var&) const = default;

 private:
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t id_ = kInvalid;
};

// Linear record of forward operations. backward() replays it in exact
// reverse order, each node once, and adds dLoss/dParameter into every
// Parameter reached. Parameter values are referenced, not copied, so a
// Parameter must outlive any tape that uses it.
class Tape {
 public:
  // Receives the tape and the gradient flowing into the node's output.
  using Backward = std::function<void(Tape&, const Tensor& grad_out)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool grad_enabled() const { return grad_enabled_; }

  Var constant(Tensor value);
  // Leaf for `p`. One node per Parameter per tape. With gradients disabled
  // (or `trainable` false) the leaf behaves as a constant.
  Var parameter(Parameter& p, bool trainable = true);

  // Appends an op result. `backward` is dropped unless gradients are
  // enabled and `requires_grad` holds. Throws NonFiniteValue on NaN/Inf.
  Var record(Tensor value, bool requires_grad, Backward backward);

  const Tensor& value(Var v) const;
  bool requires_grad(Var v) const;
  // Gradient accumulator for `v`; zero-initialized on first access.
  // Parameter leaves accumulate straight into Parameter::grad.
  Tensor& grad(Var v);
  bool has_grad(Var v) const;

  // `loss` must hold exactly one element.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  void clear();

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    Parameter* param = nullptr;
    bool requires_grad = false;
    Backward backward;
  };

  Node& node(Var v);
  const Node& node(Var v) const;

  bool grad_enabled_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, Var> param_nodes_;
};

}  // namespace faplearn::numeric

#endif  // FAPLEARN_TAPE_HPP
