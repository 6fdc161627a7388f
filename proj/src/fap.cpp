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

#include "faplearn/fap.hpp"

#include <algorithm>
#include <tuple>

#include "faplearn/error.hpp"

namespace faplearn {

FapSet::FapSet() {
  const std::pair<const char*, std::vector<std::string>> table[kFapLength] = {
      {"CreateFile", {"CreateFileA", "CreateFileW"}},
      {"ReadFile", {"ReadFile"}},
      {"GetTempFileName", {"GetTempFileNameA", "GetTempFileNameW"}},
      {"SetFileAttributes", {"SetFileAttributesA", "SetFileAttributesW"}},
      {"WriteFile", {"WriteFile"}},
      {"CopyFile", {"CopyFileA", "CopyFileExW"}},
      {"DeleteFile", {"DeleteFileA", "DeleteFileW"}},
  };
  for (std::size_t slot = 0; slot < kFapLength; ++slot) {
    canonical_[slot] = table[slot].first;
    originals_[slot] = table[slot].second;
    for (const auto& name : originals_[slot]) alias_.emplace(name, slot);
  }
}

const FapSet& FapSet::standard() {
  static const FapSet set;
  return set;
}

std::vector<std::string> FapSet::all_originals() const {
  std::vector<std::string> out;
  for (const auto& names : originals_) out.insert(out.end(), names.begin(), names.end());
  return out;
}

std::optional<std::size_t> FapSet::slot_of_original(std::string_view api) const {
  auto it = alias_.find(api);
  if (it == alias_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FapSet::slot_of_canonical(std::string_view name) const {
  for (std::size_t slot = 0; slot < kFapLength; ++slot) {
    if (canonical_[slot] == name) return slot;
  }
  return std::nullopt;
}

std::optional<std::string> canonicalize_api(std::string_view name,
                                            const FapSet& fset) {
  auto slot = fset.slot_of_original(name);
  if (!slot) return std::nullopt;
  return fset.canonical()[*slot];
}

FapVector extract_fap_vector(const Trace& trace, const FapSet& fset) {
  FapVector v{};
  for (const auto& call : trace.calls) {
    if (auto slot = fset.slot_of_original(call)) v[*slot] = true;
  }
  return v;
}

Fap vector_to_fap(const FapVector& v, const FapSet& fset) {
  Fap f;
  for (std::size_t slot = 0; slot < kFapLength; ++slot) {
    if (!v[slot]) continue;
    if (!f.text.empty()) f.text += '_';
    f.text += fset.canonical()[slot];
    f.tokens.push_back(fset.canonical()[slot]);
  }
  return f;
}

FapVector tokens_to_vector(const std::vector<std::string>& tokens,
                           const FapSet& fset) {
  FapVector v{};
  for (const auto& tok : tokens) {
    auto slot = fset.slot_of_canonical(tok);
    if (!slot) throw DataError("'" + tok + "' is not a canonical FAP API");
    if (v[*slot]) throw DataError("duplicate FAP token '" + tok + "'");
    v[*slot] = true;
  }
  return v;
}

FapVector parse_fap(std::string_view text, const FapSet& fset) {
  std::vector<std::string> tokens;
  if (!text.empty()) {
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find('_', start);
      tokens.emplace_back(text.substr(start, pos == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  }
  return tokens_to_vector(tokens, fset);
}

std::string vector_bits(const FapVector& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

const FapIdTable& FapIdTable::standard() {
  static const FapIdTable table = [] {
    FapIdTable t;
    t.add("CreateFile_WriteFile", "p1");
    t.add("CreateFile_ReadFile", "p2");
    t.add("CreateFile_WriteFile_ReadFile", "p3");
    t.add("CreateFile", "p4");
    t.add("CreateFile_ReadFile_GetTempFileName_SetFileAttributes_DeleteFile_WriteFile", "p5");
    t.add("CreateFile_WriteFile_CopyFile", "p6");
    return t;
  }();
  return table;
}

void FapIdTable::add(std::string_view fap_text, std::string id, const FapSet& fset) {
  if (id == kOtherFapId || has_id(id)) throw DataError("duplicate FAP id '" + id + "'");
  const std::string canonical = vector_to_fap(parse_fap(fap_text, fset), fset).text;
  for (const auto& [text, existing] : entries_) {
    if (text == canonical) throw DataError("FAP '" + canonical + "' already mapped to " + existing);
  }
  entries_.emplace_back(canonical, std::move(id));
}

bool FapIdTable::has_id(std::string_view id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.second == id; });
}

std::optional<FapVector> FapIdTable::vector_of(std::string_view id,
                                               const FapSet& fset) const {
  for (const auto& [text, existing] : entries_) {
    if (existing == id) return parse_fap(text, fset);
  }
  return std::nullopt;
}

std::string FapIdTable::lookup(const Fap& f) const {
  for (const auto& [text, id] : entries_) {
    if (text == f.text) return id;
  }
  return std::string(kOtherFapId);
}

std::string fap_to_id(const Fap& f, const FapIdTable& table) { return table.lookup(f); }

Vocabulary fap_vocabulary(const FapSet& fset) {
  return Vocabulary::from_tokens({fset.canonical().begin(), fset.canonical().end()});
}

IndexSequence fap_target_sequence(const FapVector& v, const Vocabulary& vocab,
                                  const FapSet& fset) {
  for (const auto& name : fset.canonical()) {
    if (!vocab.contains(name)) throw MissingVocabToken(name);
  }
  IndexSequence seq;
  for (const auto& tok : vector_to_fap(v, fset).tokens) seq.push_back(vocab.index_of(tok));
  seq.push_back(Vocabulary::kEos);
  return seq;
}

std::optional<FapVector> decode_fap_sequence(const IndexSequence& seq,
                                             const Vocabulary& vocab,
                                             const FapSet& fset) {
  FapVector v{};
  for (auto index : seq) {
    if (index < Vocabulary::kReserved || index >= vocab.size()) return std::nullopt;
    auto slot = fset.slot_of_canonical(vocab.token(index));
    if (!slot || v[*slot]) return std::nullopt;
    v[*slot] = true;
  }
  return v;
}

std::vector<FapCount> count_faps(const std::vector<Trace>& traces,
                                 const FapIdTable& table) {
  std::map<std::pair<std::string, std::string>, std::size_t> tally;
  for (const auto& t : traces) {
    ++tally[{t.family, vector_to_fap(extract_fap_vector(t)).text}];
  }
  std::vector<FapCount> out;
  for (const auto& [key, count] : tally) {
    Fap f{key.second, {}};
    out.push_back({key.first, key.second, table.lookup(f), count});
  }
  std::sort(out.begin(), out.end(), [](const FapCount& a, const FapCount& b) {
    return std::tie(a.family, b.count, a.fap_text) <
           std::tie(b.family, a.count, b.fap_text);
  });
  return out;
}

void write_fap_counts_csv(std::ostream& out, const std::vector<FapCount>& counts) {
  out << "family,fap_text,fap_id,count\n";
  for (const auto& c : counts) {
    out << c.family << ',' << c.fap_text << ',' << c.fap_id << ',' << c.count << '\n';
  }
}

void write_fap_extraction_csv(std::ostream& out, const std::vector<Trace>& traces,
                              const FapIdTable& table) {
  out << "id,family,vector,fap_text,fap_id\n";
  for (const auto& t : traces) {
    const auto v = extract_fap_vector(t);
    const auto f = vector_to_fap(v);
    out << t.id << ',' << t.family << ',' << vector_bits(v) << ',' << f.text << ','
        << table.lookup(f) << '\n';
  }
}

}  // namespace faplearn
