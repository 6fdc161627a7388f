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

#ifndef FAPLEARN_CORPUS_HPP
#define FAPLEARN_CORPUS_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace faplearn {

// API names are restricted to [A-Za-z0-9_]+.
bool is_valid_api_name(std::string_view name);

struct Trace {
  std::string id;
  std::string family;
  std::vector<std::string> calls;

  bool operator==(const Trace&) const = default;
};

using IndexSequence = std::vector<std::uint32_t>;

// Token <-> index map. Indices 0..3 are reserved for the control symbols and
// are never handed to an API name, even one literally spelled "PAD".
class Vocabulary {
 public:
  static constexpr std::uint32_t kPad = 0;
  static constexpr std::uint32_t kGo = 1;
  static constexpr std::uint32_t kEos = 2;
  static constexpr std::uint32_t kUnk = 3;
  static constexpr std::uint32_t kReserved = 4;

  Vocabulary();
  // Tokens are assigned indices 4, 5, ... in the given order.
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  std::size_t size() const { return index_to_token_.size(); }
  bool contains(std::string_view token) const;
  // Index of `token`, kUnk when absent.
  std::uint32_t index_of(std::string_view token) const;
  const std::string& token(std::uint32_t index) const;
  // Non-reserved tokens in index order.
  std::vector<std::string> tokens() const;

  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in);

  bool operator==(const Vocabulary& other) const {
    return index_to_token_ == other.index_to_token_;
  }

 private:
  void add(const std::string& token);

  std::unordered_map<std::string, std::uint32_t> token_to_index_;
  std::vector<std::string> index_to_token_;
};

struct CorpusSplit {
  std::vector<Trace> train;
  std::vector<Trace> validation;
  std::vector<Trace> test;
  std::uint64_t seed = 0;
};

struct SplitSizes {
  std::size_t train;
  std::size_t validation;
  std::size_t test;
};

inline constexpr std::size_t kDefaultMaxLen = 512;
inline constexpr std::size_t kMinSplitCorpus = 20;

// Line format: id<TAB>family<TAB>call1,call2,...  `#` lines are comments.
std::vector<Trace> parse_corpus(std::istream& in);
std::vector<Trace> load_corpus(const std::string& path);
void write_corpus(std::ostream& out, const std::vector<Trace>& corpus);
void save_corpus(const std::string& path, const std::vector<Trace>& corpus);

std::vector<Trace> drop_rare_families(const std::vector<Trace>& corpus,
                                      std::size_t min_count);

// 75/5/20 sizes: train and validation rounded half-up, remainder to test.
SplitSizes split_sizes(std::size_t n);
CorpusSplit split_corpus(const std::vector<Trace>& corpus, std::uint64_t seed);

Vocabulary build_vocabulary(const std::vector<Trace>& traces,
                            std::size_t min_token_count);

IndexSequence encode_trace(const Vocabulary& vocab, const Trace& trace,
                           std::size_t max_len = kDefaultMaxLen);

// Sorted distinct family names.
std::vector<std::string> family_labels(const std::vector<Trace>& corpus);
std::map<std::string, std::size_t> family_counts(
    const std::vector<Trace>& corpus);

}  // namespace faplearn

#endif  // FAPLEARN_CORPUS_HPP
