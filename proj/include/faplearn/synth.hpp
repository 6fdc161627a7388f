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

#ifndef FAPLEARN_SYNTH_HPP
#define FAPLEARN_SYNTH_HPP

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "faplearn/config.hpp"
#include "faplearn/corpus.hpp"
#include "faplearn/fap.hpp"

namespace faplearn {

// A short call run inserted `min_repeats..max_repeats` times with the given
// probability. Canonical FAP names inside a motif are written out as a
// randomly chosen original spelling.
struct Motif {
  std::vector<std::string> calls;
  double probability = 1.0;
  std::size_t min_repeats = 1;
  std::size_t max_repeats = 1;
};

struct FamilyProfile {
  std::string name;
  std::size_t count = 0;
  std::vector<Motif> motifs;
  std::vector<std::string> background;                // empty: default alphabet
  std::array<double, kFapLength> fap_rates{};         // canonical slot order
  std::size_t fap_min_repeats = 1;
  std::size_t fap_max_repeats = 3;
  double length_mean = 235.0;
  double length_spread = 50.0;                        // uniform over mean +/- spread
};

struct SynthSpec {
  std::vector<FamilyProfile> families;
  std::uint64_t seed = 0;

  // Throws DataError on counts of 0, probabilities outside [0,1], repeat
  // ranges out of order, or a mean length shorter than the motif load.
  void validate() const;
};

// 50 non-file Windows API names.
const std::vector<std::string>& default_background();

// Trace ids are s000000, s000001, ... in profile order. Each trace draws from
// its own substream of the seed, so generation order does not matter.
std::vector<Trace> generate_corpus(const SynthSpec& spec);
Trace generate_trace(const FamilyProfile& profile, std::uint64_t seed, std::size_t index);

// Four families of 500: trojan-fakeav, adware, packed, worm.
SynthSpec default_benchmark_spec();
// Eight finer families with the proportions and mean lengths of the
// fine-grained dataset.
SynthSpec fine_grained_spec();

// `seed = N` plus one [family] block per profile:
//   name, count, length_mean, length_spread, background = a,b,c
//   motif = <prob> <min>-<max> call1,call2,...   (repeatable)
//   rate.<CanonicalFapApi> = <prob>, fap_repeats = <min>-<max>
SynthSpec synth_spec_from(const ConfigFile& file);
SynthSpec load_synth_spec(const std::string& path);
void write_synth_spec(std::ostream& out, const SynthSpec& spec);

}  // namespace faplearn

#endif  // FAPLEARN_SYNTH_HPP
