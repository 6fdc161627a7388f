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

#ifndef FAPLEARN_CHECKPOINT_HPP
#define FAPLEARN_CHECKPOINT_HPP

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "faplearn/tensor.hpp"

namespace faplearn::numeric {

inline constexpr const char* kCheckpointHeader = "faplearn-ckpt v1";

// Text checkpoint:
//
//   faplearn-ckpt v1
//   @manifest <key> <value> <value> ...     (zero or more)
//   <name> <shape>                          (shape "n" or "RxC")
//   <values, whitespace separated, %.17g>
//
// Values round-trip exactly.
struct Checkpoint {
  std::vector<std::pair<std::string, std::vector<std::string>>> manifest;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const std::vector<std::string>* manifest_value(const std::string& key) const;
  const Tensor* tensor(const std::string& name) const;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

Checkpoint snapshot(std::span<const Parameter* const> params);
// Copies tensors into matching parameters by name. Every parameter must be
// present with an identical shape.
void restore(const Checkpoint& ckpt, std::span<Parameter* const> params);

}  // namespace faplearn::numeric

#endif  // FAPLEARN_CHECKPOINT_HPP
