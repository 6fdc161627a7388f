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

#include "faplearn/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "faplearn/error.hpp"

namespace faplearn::numeric {
namespace {

Tensor parse_shape(const std::string& text, std::size_t line) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) return Tensor(std::stoul(text));
    return Tensor(std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1)));
  } catch (const std::exception&) {
    throw MalformedLine(line, "bad tensor shape '" + text + "'");
  }
}

}  // namespace

const std::vector<std::string>* Checkpoint::manifest_value(const std::string& key) const {
  for (const auto& [k, v] : manifest) {
    if (k == key) return &v;
  }
  return nullptr;
}

const Tensor* Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out << kCheckpointHeader << '\n';
  for (const auto& [key, values] : ckpt.manifest) {
    out << "@manifest " << key;
    for (const auto& v : values) out << ' ' << v;
    out << '\n';
  }
  char buf[32];
  for (const auto& [name, t] : ckpt.tensors) {
    out << name << ' ' << t.shape_string() << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", t[i]);
      out << buf << ((i + 1) % 8 == 0 || i + 1 == t.size() ? '\n' : ' ');
    }
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kCheckpointHeader) {
    throw DataError("not a faplearn checkpoint (missing '" + std::string(kCheckpointHeader) + "' header)");
  }
  Checkpoint ckpt;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head == "@manifest") {
      std::string key, v;
      if (!(fields >> key)) throw MalformedLine(line_no, "manifest entry without key");
      std::vector<std::string> values;
      while (fields >> v) values.push_back(v);
      ckpt.manifest.emplace_back(key, std::move(values));
      continue;
    }
    std::string shape;
    if (!(fields >> shape)) throw MalformedLine(line_no, "expected '<name> <shape>'");
    Tensor t = parse_shape(shape, line_no);
    std::size_t filled = 0;
    while (filled < t.size() && std::getline(in, line)) {
      ++line_no;
      const char* p = line.c_str();
      while (true) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) break;
        if (filled == t.size()) throw MalformedLine(line_no, "too many values for " + head);
        t[filled++] = v;
        p = end;
      }
    }
    if (filled != t.size()) throw DataError("checkpoint truncated in tensor '" + head + "'");
    ckpt.tensors.emplace_back(head, std::move(t));
  }
  return ckpt;
}

Checkpoint snapshot(std::span<const Parameter* const> params) {
  Checkpoint ckpt;
  for (const Parameter* p : params) ckpt.tensors.emplace_back(p->name, p->value);
  return ckpt;
}

void restore(const Checkpoint& ckpt, std::span<Parameter* const> params) {
  for (Parameter* p : params) {
    const Tensor* t = ckpt.tensor(p->name);
    if (!t) throw DataError("checkpoint has no tensor '" + p->name + "'");
    if (!t->same_shape(p->value)) {
      throw DataError("checkpoint tensor '" + p->name + "' has shape " + t->shape_string() + ", expected " +
                      p->value.shape_string());
    }
    p->value = *t;
  }
}

}  // namespace faplearn::numeric
