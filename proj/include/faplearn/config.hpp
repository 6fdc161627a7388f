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

#ifndef FAPLEARN_CONFIG_HPP
#define FAPLEARN_CONFIG_HPP

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace faplearn {

// One block of `key = value` lines. Keys may repeat; order is kept.
class ConfigSection {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  explicit ConfigSection(std::string name = {}) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const std::vector<Entry>& entries() const { return entries_; }
  void add(std::string key, std::string value, std::size_t line = 0);

  bool has(std::string_view key) const;
  // Last value wins for scalar lookups.
  std::optional<std::string> get(std::string_view key) const;
  std::vector<std::string> get_all(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

 private:
  std::string name_;
  std::vector<Entry> entries_;
};

// The flat config dialect: global `key = value` lines, `#` comments, and
// optional repeated `[section]` headers opening a new block each time.
struct ConfigFile {
  ConfigSection global;
  std::vector<ConfigSection> sections;

  std::vector<const ConfigSection*> sections_named(std::string_view name) const;
};

ConfigFile parse_config(std::istream& in);
ConfigFile load_config(const std::string& path);

}  // namespace faplearn

#endif  // FAPLEARN_CONFIG_HPP
