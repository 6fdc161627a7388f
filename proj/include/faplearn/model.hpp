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

#ifndef FAPLEARN_MODEL_HPP
#define FAPLEARN_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "faplearn/checkpoint.hpp"
#include "faplearn/corpus.hpp"
#include "faplearn/gru.hpp"

namespace faplearn {

struct ModelConfig {
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 128;
  bool bidirectional = false;
  double update_bias = -3.0;  // initial encoder update-gate bias
};

// One trace prepared for every task.
struct Example {
  IndexSequence input;           // API indices
  std::uint32_t family = 0;      // index into Model::families()
  IndexSequence fap;             // FAP tokens + EOS
  IndexSequence reconstruction;  // input + EOS
};

// Greedy FAP output never needs more than the seven tokens plus EOS.
inline constexpr std::size_t kFapDecodeSteps = 8;

// Greedy FAP output (EOS stripped) against a target ending in EOS.
bool fap_exact_match(const IndexSequence& predicted, const IndexSequence& target);

// Shared encoder with reconstruction, classification and FAP decoders.
class Model {
 public:
  Model(const ModelConfig& config, Vocabulary api_vocab, std::vector<std::string> families);

  const ModelConfig& config() const { return config_; }
  const Vocabulary& api_vocab() const { return api_vocab_; }
  const Vocabulary& fap_vocab() const { return fap_vocab_; }
  const std::vector<std::string>& families() const { return families_; }
  std::uint32_t family_index(const std::string& family) const;

  void initialize(Rng& rng);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  Example make_example(const Trace& trace, std::size_t max_len = kDefaultMaxLen) const;
  std::vector<Example> make_examples(const std::vector<Trace>& traces,
                                     std::size_t max_len = kDefaultMaxLen) const;

  // N x H context vectors, computed in fixed-size batches.
  Tensor contexts(const std::vector<const IndexSequence*>& inputs) const;
  Tensor contexts(const std::vector<Example>& examples) const;

  std::vector<std::uint32_t> predict_families(const Tensor& contexts) const;
  std::vector<IndexSequence> predict_faps(const Tensor& contexts) const;

  numeric::Checkpoint to_checkpoint() const;
  static Model from_checkpoint(const numeric::Checkpoint& ckpt);
  void save(const std::string& path) const;
  static Model load(const std::string& path);

  Encoder encoder;
  Decoder reconstruction;
  Decoder classifier;
  Decoder fap;

  // Extra manifest entries carried through save and load.
  std::vector<std::pair<std::string, std::vector<std::string>>> metadata;

 private:
  ModelConfig config_;
  Vocabulary api_vocab_;
  Vocabulary fap_vocab_;
  std::vector<std::string> families_;
};

}  // namespace faplearn

#endif  // FAPLEARN_MODEL_HPP
