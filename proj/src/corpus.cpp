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

#include "faplearn/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "faplearn/error.hpp"
#include "faplearn/rng.hpp"

namespace faplearn {
namespace {

constexpr const char* kReservedNames[] = {"PAD", "GO", "EOS", "UNK"};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

}  // namespace

bool is_valid_api_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  });
}

Vocabulary::Vocabulary()
    : index_to_token_(std::begin(kReservedNames), std::end(kReservedNames)) {}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  Vocabulary v;
  for (const auto& t : tokens) v.add(t);
  return v;
}

void Vocabulary::add(const std::string& token) {
  const auto index = static_cast<std::uint32_t>(index_to_token_.size());
  auto [it, inserted] = token_to_index_.emplace(token, index);
  if (!inserted) throw DataError("duplicate vocabulary token '" + token + "'");
  index_to_token_.push_back(token);
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_index_.contains(std::string(token));
}

std::uint32_t Vocabulary::index_of(std::string_view token) const {
  auto it = token_to_index_.find(std::string(token));
  return it == token_to_index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(std::uint32_t index) const {
  if (index >= index_to_token_.size()) {
    throw IndexOutOfVocab(index, index_to_token_.size());
  }
  return index_to_token_[index];
}

std::vector<std::string> Vocabulary::tokens() const {
  return {index_to_token_.begin() + kReserved, index_to_token_.end()};
}

void Vocabulary::write(std::ostream& out) const {
  for (std::size_t i = 0; i < index_to_token_.size(); ++i) {
    out << i << '\t' << index_to_token_[i] << '\n';
  }
}

Vocabulary Vocabulary::read(std::istream& in) {
  Vocabulary v;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw MalformedLine(line_no, "expected index<TAB>token");
    std::size_t index = 0;
    try {
      index = std::stoul(std::string(fields[0]));
    } catch (const std::exception&) {
      throw MalformedLine(line_no, "bad index");
    }
    if (index != expected) throw MalformedLine(line_no, "indices must be dense and ordered");
    const std::string token(fields[1]);
    if (index < kReserved) {
      if (token != kReservedNames[index]) {
        throw MalformedLine(line_no, "reserved index " + std::to_string(index) +
                                         " must be " + kReservedNames[index]);
      }
    } else {
      if (token.empty() || has_space(token)) throw MalformedLine(line_no, "bad token");
      v.add(token);
    }
    ++expected;
  }
  if (expected < kReserved) throw DataError("vocabulary file lacks reserved entries");
  return v;
}

std::vector<Trace> parse_corpus(std::istream& in) {
  std::vector<Trace> corpus;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw MalformedLine(line_no, "expected 3 tab-separated fields, got " +
                                       std::to_string(fields.size()));
    }
    if (fields[0].empty() || has_space(fields[0])) throw MalformedLine(line_no, "bad id");
    if (fields[1].empty() || has_space(fields[1])) throw MalformedLine(line_no, "bad family");
    if (fields[2].empty()) throw MalformedLine(line_no, "empty call list");
    Trace t;
    t.id = std::string(fields[0]);
    t.family = std::string(fields[1]);
    for (auto call : split(fields[2], ',')) {
      if (!is_valid_api_name(call)) {
        throw MalformedLine(line_no, "invalid API name '" + std::string(call) + "'");
      }
      t.calls.emplace_back(call);
    }
    if (!seen.insert(t.id).second) throw DuplicateId(t.id);
    corpus.push_back(std::move(t));
  }
  return corpus;
}

std::vector<Trace> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus '" + path + "'");
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Trace>& corpus) {
  for (const auto& t : corpus) {
    out << t.id << '\t' << t.family << '\t';
    for (std::size_t i = 0; i < t.calls.size(); ++i) {
      if (i) out << ',';
      out << t.calls[i];
    }
    out << '\n';
  }
}

void save_corpus(const std::string& path, const std::vector<Trace>& corpus) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus '" + path + "'");
  write_corpus(out, corpus);
}

std::vector<Trace> drop_rare_families(const std::vector<Trace>& corpus,
                                      std::size_t min_count) {
  const auto counts = family_counts(corpus);
  std::vector<Trace> kept;
  std::copy_if(corpus.begin(), corpus.end(), std::back_inserter(kept),
               [&](const Trace& t) { return counts.at(t.family) >= min_count; });
  return kept;
}

SplitSizes split_sizes(std::size_t n) {
  // Integer form of round(0.75 n) and round(0.05 n), halves rounded up.
  const std::size_t train = (75 * n + 50) / 100;
  const std::size_t validation = (5 * n + 50) / 100;
  return {train, validation, n - train - validation};
}

CorpusSplit split_corpus(const std::vector<Trace>& corpus, std::uint64_t seed) {
  if (corpus.size() < kMinSplitCorpus) {
    throw CorpusTooSmall(corpus.size(), kMinSplitCorpus);
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span(order));

  const auto sizes = split_sizes(corpus.size());
  CorpusSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Trace& t = corpus[order[i]];
    if (i < sizes.train) {
      split.train.push_back(t);
    } else if (i < sizes.train + sizes.validation) {
      split.validation.push_back(t);
    } else {
      split.test.push_back(t);
    }
  }
  return split;
}

Vocabulary build_vocabulary(const std::vector<Trace>& traces,
                            std::size_t min_token_count) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : traces) {
    for (const auto& c : t.calls) ++counts[c];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  for (const auto& [token, count] : ranked) {
    if (count >= min_token_count) tokens.push_back(token);
  }
  return Vocabulary::from_tokens(tokens);
}

IndexSequence encode_trace(const Vocabulary& vocab, const Trace& trace,
                           std::size_t max_len) {
  const std::size_t n = std::min(max_len, trace.calls.size());
  IndexSequence out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(vocab.index_of(trace.calls[i]));
  return out;
}

std::vector<std::string> family_labels(const std::vector<Trace>& corpus) {
  std::set<std::string> names;
  for (const auto& t : corpus) names.insert(t.family);
  return {names.begin(), names.end()};
}

std::map<std::string, std::size_t> family_counts(
    const std::vector<Trace>& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : corpus) ++counts[t.family];
  return counts;
}

}  // namespace faplearn
