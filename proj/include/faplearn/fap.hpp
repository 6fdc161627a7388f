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

#ifndef FAPLEARN_FAP_HPP
#define FAPLEARN_FAP_HPP

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "faplearn/corpus.hpp"

namespace faplearn {

inline constexpr std::size_t kFapLength = 7;

// The seven canonical file-access APIs and the original spellings folded
// onto each. Aliasing is an exact table lookup; no suffix guessing.
class FapSet {
 public:
  // The standard table: CreateFile, ReadFile, GetTempFileName,
  // SetFileAttributes, WriteFile, CopyFile, DeleteFile.
  static const FapSet& standard();

  const std::array<std::string, kFapLength>& canonical() const { return canonical_; }
  const std::vector<std::string>& originals(std::size_t slot) const { return originals_[slot]; }
  // Every original spelling across all slots, in table order.
  std::vector<std::string> all_originals() const;

  std::optional<std::size_t> slot_of_original(std::string_view api) const;
  std::optional<std::size_t> slot_of_canonical(std::string_view name) const;

 private:
  FapSet();

  std::array<std::string, kFapLength> canonical_;
  std::array<std::vector<std::string>, kFapLength> originals_;
  std::map<std::string, std::size_t, std::less<>> alias_;
};

using FapVector = std::array<bool, kFapLength>;

struct Fap {
  std::string text;                 // underscore-joined, canonical order
  std::vector<std::string> tokens;  // same, as a list

  bool operator==(const Fap&) const = default;
};

std::optional<std::string> canonicalize_api(std::string_view name,
                                            const FapSet& fset = FapSet::standard());

FapVector extract_fap_vector(const Trace& trace,
                             const FapSet& fset = FapSet::standard());

Fap vector_to_fap(const FapVector& v, const FapSet& fset = FapSet::standard());

// Parses canonical FAP tokens (any order, no duplicates) back to a vector.
// Accepts "" for the empty FAP.
FapVector parse_fap(std::string_view text, const FapSet& fset = FapSet::standard());
FapVector tokens_to_vector(const std::vector<std::string>& tokens,
                           const FapSet& fset = FapSet::standard());

std::string vector_bits(const FapVector& v);

inline constexpr std::string_view kOtherFapId = "other";

// FAP text -> short id. Entries are normalized to canonical order on insert.
class FapIdTable {
 public:
  // p1..p6 from the published mapping list.
  static const FapIdTable& standard();

  void add(std::string_view fap_text, std::string id,
           const FapSet& fset = FapSet::standard());
  // Canonical text -> id, in id insertion order.
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  bool has_id(std::string_view id) const;
  // The FAP behind an id; nullopt for "other" and unknown ids.
  std::optional<FapVector> vector_of(std::string_view id,
                                     const FapSet& fset = FapSet::standard()) const;
  std::string lookup(const Fap& f) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string fap_to_id(const Fap& f, const FapIdTable& table = FapIdTable::standard());

// Output alphabet of the FAP decoder: reserved symbols + canonical names.
Vocabulary fap_vocabulary(const FapSet& fset = FapSet::standard());

// Indices of the FAP tokens followed by EOS.
IndexSequence fap_target_sequence(const FapVector& v, const Vocabulary& vocab,
                                  const FapSet& fset = FapSet::standard());

// Inverse of fap_target_sequence for decoder output (EOS already stripped);
// nullopt if the tokens are not a valid FAP.
std::optional<FapVector> decode_fap_sequence(const IndexSequence& seq,
                                             const Vocabulary& vocab,
                                             const FapSet& fset = FapSet::standard());

struct FapCount {
  std::string family;
  std::string fap_text;
  std::string fap_id;
  std::size_t count = 0;
};

// Grouped by family (sorted), then count desc, then fap text asc.
std::vector<FapCount> count_faps(const std::vector<Trace>& traces,
                                 const FapIdTable& table = FapIdTable::standard());
void write_fap_counts_csv(std::ostream& out, const std::vector<FapCount>& counts);
// Per-trace extraction: id,family,vector,fap_text,fap_id
void write_fap_extraction_csv(std::ostream& out, const std::vector<Trace>& traces,
                              const FapIdTable& table = FapIdTable::standard());

}  // namespace faplearn

#endif  // FAPLEARN_FAP_HPP
