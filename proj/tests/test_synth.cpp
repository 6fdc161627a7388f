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


#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "faplearn/error.hpp"
#include "faplearn/evaluate.hpp"
#include "faplearn/fap.hpp"
#include "faplearn/synth.hpp"

namespace faplearn {
namespace {

const std::vector<Trace>& benchmark() {
  static const std::vector<Trace> corpus = generate_corpus(default_benchmark_spec());
  return corpus;
}

std::size_t slot_of_call(const std::string& call) {
  const FapSet& fset = FapSet::standard();
  if (auto slot = fset.slot_of_canonical(call)) return *slot;
  if (auto slot = fset.slot_of_original(call)) return *slot;
  return kFapLength;
}

// Probability that a trace of `profile` contains an API of `slot`.
double expected_presence(const FamilyProfile& profile, std::size_t slot) {
  double absent = 1.0 - profile.fap_rates[slot];
  for (const Motif& m : profile.motifs) {
    bool contains = false;
    for (const auto& c : m.calls) contains = contains || slot_of_call(c) == slot;
    if (contains) absent *= 1.0 - m.probability;
  }
  return 1.0 - absent;
}

TEST(Synth, BenchmarkShape) {
  const SynthSpec spec = default_benchmark_spec();
  ASSERT_EQ(spec.families.size(), 4u);
  const auto& corpus = benchmark();
  EXPECT_EQ(corpus.size(), 2000u);
  std::map<std::string, std::size_t> counts;
  double total_len = 0.0;
  std::set<std::string> ids;
  for (const Trace& t : corpus) {
    ++counts[t.family];
    total_len += static_cast<double>(t.calls.size());
    ids.insert(t.id);
  }
  EXPECT_EQ(ids.size(), corpus.size());
  for (const auto& [family, n] : counts) EXPECT_EQ(n, 500u) << family;
  EXPECT_NEAR(total_len / static_cast<double>(corpus.size()), 235.0, 10.0);
}

TEST(Synth, Deterministic) {
  SynthSpec spec = default_benchmark_spec();
  for (auto& f : spec.families) f.count = 20;
  const auto a = generate_corpus(spec);
  EXPECT_EQ(a, generate_corpus(spec));
  EXPECT_EQ(generate_trace(spec.families[1], spec.seed, 25), a[25]);
  spec.seed += 1;
  EXPECT_NE(a, generate_corpus(spec));
}

TEST(Synth, PlantedRatesWithinFourSigma) {
  const SynthSpec spec = default_benchmark_spec();
  const auto& corpus = benchmark();
  for (const FamilyProfile& profile : spec.families) {
    std::array<std::size_t, kFapLength> present{};
    std::size_t n = 0;
    for (const Trace& t : corpus) {
      if (t.family != profile.name) continue;
      ++n;
      const FapVector v = extract_fap_vector(t);
      for (std::size_t s = 0; s < kFapLength; ++s) present[s] += v[s];
    }
    for (std::size_t s = 0; s < kFapLength; ++s) {
      const double p = expected_presence(profile, s);
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
      const double observed = static_cast<double>(present[s]) / static_cast<double>(n);
      EXPECT_LE(std::abs(observed - p), 4.0 * sigma + 1e-12) << profile.name << " slot " << s;
    }
  }
}

TEST(Synth, RateOneAndZero) {
  FamilyProfile p;
  p.name = "f";
  p.count = 50;
  p.fap_rates = {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
  p.length_mean = 30;
  p.length_spread = 5;
  SynthSpec spec{{p}, 3};
  for (const Trace& t : generate_corpus(spec)) {
    EXPECT_EQ(vector_bits(extract_fap_vector(t)), "1000100");
    EXPECT_GE(t.calls.size(), 25u);
    EXPECT_LE(t.calls.size(), 35u);
  }
}

TEST(Synth, ChunksRepeatWithinRange) {
  FamilyProfile p;
  p.name = "f";
  p.count = 40;
  p.motifs = {{{"VirtualAlloc", "VirtualProtect"}, 1.0, 2, 2}};
  p.fap_rates[6] = 1.0;
  p.fap_min_repeats = 3;
  p.fap_max_repeats = 3;
  p.length_mean = 40;
  p.length_spread = 0;
  for (const Trace& t : generate_corpus({{p}, 5})) {
    EXPECT_EQ(t.calls.size(), 40u);
    std::size_t alloc = 0, deletes = 0;
    for (const auto& c : t.calls) {
      alloc += c == "VirtualAlloc";
      deletes += slot_of_call(c) == 6;
    }
    EXPECT_EQ(alloc, 2u);
    EXPECT_EQ(deletes, 3u);
  }
}

TEST(Synth, BackgroundHasNoFileAccessApis) {
  const auto& bg = default_background();
  EXPECT_GE(bg.size(), 20u);
  for (const auto& name : bg) {
    EXPECT_FALSE(canonicalize_api(name).has_value()) << name;
    EXPECT_TRUE(is_valid_api_name(name)) << name;
  }
}

TEST(Synth, CaseStudyStatistics) {
  const auto& corpus = benchmark();
  const auto p6 = fap_significance(corpus, "p6");
  const auto p5 = fap_significance(corpus, "p5");
  EXPECT_GE(p6.at("worm"), 0.5);
  for (const auto& [family, ratio] : p6) {
    if (family != "worm") {
      EXPECT_LE(ratio, 0.05) << family;
    }
  }
  EXPECT_NEAR(p5.at("adware"), 0.70, 0.05);
}

std::map<std::string, double> bigrams(const Trace& t) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i + 1 < t.calls.size(); ++i) out[t.calls[i] + " " + t.calls[i + 1]] += 1.0;
  double norm = 0.0;
  for (const auto& [k, v] : out) norm += v * v;
  for (auto& [k, v] : out) v /= std::sqrt(norm);
  return out;
}

TEST(Synth, FamiliesSeparableByBigramCentroids) {
  const auto& corpus = benchmark();
  std::map<std::string, std::map<std::string, double>> centroids;
  std::map<std::string, double> sizes;
  for (std::size_t i = 0; i < corpus.size(); i += 2) {
    for (const auto& [k, v] : bigrams(corpus[i])) centroids[corpus[i].family][k] += v;
    sizes[corpus[i].family] += 1.0;
  }
  std::size_t ok = 0, total = 0;
  for (std::size_t i = 1; i < corpus.size(); i += 2) {
    const auto b = bigrams(corpus[i]);
    std::string best;
    double best_score = -1.0;
    for (const auto& [family, c] : centroids) {
      double dot = 0.0, norm = 0.0;
      for (const auto& [k, v] : c) norm += v * v;
      for (const auto& [k, v] : b) {
        auto it = c.find(k);
        if (it != c.end()) dot += v * it->second;
      }
      const double score = dot / std::sqrt(norm);
      if (score > best_score) {
        best_score = score;
        best = family;
      }
    }
    ok += best == corpus[i].family;
    ++total;
  }
  EXPECT_GT(static_cast<double>(ok) / static_cast<double>(total), 0.9);
}

TEST(Synth, FineGrainedSpec) {
  const SynthSpec spec = fine_grained_spec();
  ASSERT_EQ(spec.families.size(), 8u);
  std::size_t total = 0;
  for (const auto& f : spec.families) total += f.count;
  EXPECT_EQ(total, 658u + 160u + 78u + 54u + 48u + 482u + 318u + 176u);
  EXPECT_NO_THROW(spec.validate());
}

TEST(Synth, SpecFileRoundTrip) {
  for (const SynthSpec& spec : {default_benchmark_spec(), fine_grained_spec()}) {
    std::stringstream ss;
    write_synth_spec(ss, spec);
    const SynthSpec back = synth_spec_from(parse_config(ss));
    ASSERT_EQ(back.families.size(), spec.families.size());
    EXPECT_EQ(back.seed, spec.seed);
    for (std::size_t i = 0; i < spec.families.size(); ++i) {
      const auto& a = spec.families[i];
      const auto& b = back.families[i];
      EXPECT_EQ(a.name, b.name);
      EXPECT_EQ(a.count, b.count);
      EXPECT_EQ(a.fap_rates, b.fap_rates);
      EXPECT_EQ(a.length_mean, b.length_mean);
      EXPECT_EQ(a.length_spread, b.length_spread);
      ASSERT_EQ(a.motifs.size(), b.motifs.size());
      for (std::size_t m = 0; m < a.motifs.size(); ++m) {
        EXPECT_EQ(a.motifs[m].calls, b.motifs[m].calls);
        EXPECT_EQ(a.motifs[m].probability, b.motifs[m].probability);
      }
    }
    SynthSpec small = spec, small_back = back;
    for (auto& f : small.families) f.count = 3;
    for (auto& f : small_back.families) f.count = 3;
    EXPECT_EQ(generate_corpus(small), generate_corpus(small_back));
  }
}

TEST(Synth, SpecFileParsing) {
  std::istringstream in(
      "seed = 4\n[family]\nname = w\ncount = 7\nlength_mean = 20\nlength_spread = 2\n"
      "motif = 0.5 1-2 WSAStartup,connect\nrate.CopyFile = 0.25\nfap_repeats = 2-3\n"
      "background = Sleep,NtClose\n");
  const SynthSpec spec = synth_spec_from(parse_config(in));
  ASSERT_EQ(spec.families.size(), 1u);
  const auto& f = spec.families[0];
  EXPECT_EQ(spec.seed, 4u);
  EXPECT_EQ(f.count, 7u);
  EXPECT_EQ(f.fap_rates[5], 0.25);
  EXPECT_EQ(f.fap_min_repeats, 2u);
  EXPECT_EQ(f.motifs[0].max_repeats, 2u);
  EXPECT_EQ(f.background, (std::vector<std::string>{"Sleep", "NtClose"}));

  auto fails = [](const std::string& text) {
    std::istringstream s(text);
    return synth_spec_from(parse_config(s));
  };
  EXPECT_THROW(fails("seed = 1\ncolour = red\n"), MalformedLine);
  EXPECT_THROW(fails("[family]\nname = a\ncount = 1\nrate.ReadFileA = 0.5\n"), MalformedLine);
  EXPECT_THROW(fails("[family]\nname = a\ncount = 1\nshape = round\n"), MalformedLine);
  EXPECT_THROW(fails("[family]\nname = a\ncount = 0\n"), DataError);
  EXPECT_THROW(fails("[family]\nname = a\ncount = 2\nrate.CopyFile = 1.5\n"), DataError);
  EXPECT_THROW(fails("[family]\nname = a\ncount = 2\nmotif = 0.5 3-1 Sleep\n"), DataError);
  EXPECT_THROW(fails("[profile]\nname = a\n"), DataError);
}

}  // namespace
}  // namespace faplearn
