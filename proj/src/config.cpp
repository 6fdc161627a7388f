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

#include "faplearn/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "faplearn/error.hpp"

namespace faplearn {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t line_of(const ConfigSection& section, std::string_view key) {
  for (auto it = section.entries().rbegin(); it != section.entries().rend();
       ++it) {
    if (it->key == key) return it->line;
  }
  return 0;
}

}  // namespace

void ConfigSection::add(std::string key, std::string value, std::size_t line) {
  entries_.push_back({std::move(key), std::move(value), line});
}

bool ConfigSection::has(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.key == key; });
}

std::optional<std::string> ConfigSection::get(std::string_view key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->key == key) return it->value;
  }
  return std::nullopt;
}

std::vector<std::string> ConfigSection::get_all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.key == key) out.push_back(e.value);
  }
  return out;
}

std::string ConfigSection::get_string(std::string_view key,
                                      std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double ConfigSection::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw MalformedLine(line_of(*this, key),
                        "'" + std::string(key) + "' is not a number: " + *v);
  }
}

long long ConfigSection::get_int(std::string_view key,
                                 long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw MalformedLine(line_of(*this, key),
                        "'" + std::string(key) + "' is not an integer: " + *v);
  }
  return out;
}

bool ConfigSection::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
  if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
  throw MalformedLine(line_of(*this, key),
                      "'" + std::string(key) + "' is not a boolean: " + *v);
}

std::vector<const ConfigSection*> ConfigFile::sections_named(
    std::string_view name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections) {
    if (s.name() == name) out.push_back(&s);
  }
  return out;
}

ConfigFile parse_config(std::istream& in) {
  ConfigFile file;
  ConfigSection* current = &file.global;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw MalformedLine(line_no, "bad section header");
      }
      file.sections.emplace_back(std::string(trim(line.substr(1, line.size() - 2))));
      current = &file.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw MalformedLine(line_no, "expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw MalformedLine(line_no, "empty key");
    current->add(std::string(key), std::string(value), line_no);
  }
  return file;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace faplearn
