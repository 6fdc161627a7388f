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

#include "faplearn/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "faplearn/error.hpp"
#include "faplearn/fap.hpp"

namespace faplearn {

namespace {

constexpr std::size_t kInferenceBatch = 64;

EncoderConfig encoder_config(const ModelConfig& c, std::size_t vocab) {
  return {vocab, c.embed_dim, c.hidden_dim, c.bidirectional, c.update_bias};
}

DecoderConfig reconstruction_config(const ModelConfig& c, std::size_t vocab) {
  return {DecoderKind::reconstruction, vocab, vocab, c.embed_dim, c.hidden_dim, Vocabulary::kGo,
          Vocabulary::kEos};
}

DecoderConfig classifier_config(const ModelConfig& c, std::size_t families) {
  return {DecoderKind::classification, 1, families, c.embed_dim, c.hidden_dim, 0, std::nullopt};
}

DecoderConfig fap_config(const ModelConfig& c) {
  const std::size_t v = fap_vocabulary().size();
  return {DecoderKind::fap, v, v, c.embed_dim, c.hidden_dim, Vocabulary::kGo, Vocabulary::kEos};
}

void check_token(const std::string& s) {
  if (s.empty() || std::any_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); })) {
    throw DataError("name not storable in a checkpoint manifest: '" + s + "'");
  }
}

const std::vector<std::string>& require(const numeric::Checkpoint& ckpt, const std::string& key) {
  const auto* v = ckpt.manifest_value(key);
  if (!v) throw DataError("checkpoint manifest lacks '" + key + "'");
  return *v;
}

std::size_t require_size(const numeric::Checkpoint& ckpt, const std::string& key) {
  const auto& v = require(ckpt, key);
  if (v.size() != 1) throw DataError("checkpoint manifest '" + key + "' must have one value");
  try {
    return static_cast<std::size_t>(std::stoull(v.front()));
  } catch (const std::exception&) {
    throw DataError("checkpoint manifest '" + key + "' is not an integer");
  }
}

}  // namespace

bool fap_exact_match(const IndexSequence& predicted, const IndexSequence& target) {
  if (target.empty() || target.back() != Vocabulary::kEos) return false;
  return predicted.size() + 1 == target.size() && std::equal(predicted.begin(), predicted.end(), target.begin());
}

Model::Model(const ModelConfig& config, Vocabulary api_vocab, std::vector<std::string> families)
    : encoder(encoder_config(config, api_vocab.size())),
      reconstruction("decoder.recon", reconstruction_config(config, api_vocab.size())),
      classifier("decoder.cls", classifier_config(config, families.size())),
      fap("decoder.fap", fap_config(config)),
      config_(config),
      api_vocab_(std::move(api_vocab)),
      fap_vocab_(fap_vocabulary()),
      families_(std::move(families)) {
  if (families_.empty()) throw DataError("model needs at least one family");
  if (!std::is_sorted(families_.begin(), families_.end()) ||
      std::adjacent_find(families_.begin(), families_.end()) != families_.end()) {
    throw DataError("family list must be sorted and distinct");
  }
}

std::uint32_t Model::family_index(const std::string& family) const {
  auto it = std::lower_bound(families_.begin(), families_.end(), family);
  if (it == families_.end() || *it != family) throw MissingVocabToken(family);
  return static_cast<std::uint32_t>(it - families_.begin());
}

void Model::initialize(Rng& rng) {
  encoder.initialize(rng);
  reconstruction.initialize(rng);
  classifier.initialize(rng);
  fap.initialize(rng);
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out = encoder.parameters();
  for (Decoder* d : {&reconstruction, &classifier, &fap}) {
    for (Parameter* p : d->parameters()) out.push_back(p);
  }
  return out;
}

std::vector<const Parameter*> Model::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<Model*>(this)->parameters()) out.push_back(p);
  return out;
}

Example Model::make_example(const Trace& trace, std::size_t max_len) const {
  Example e;
  e.input = encode_trace(api_vocab_, trace, max_len);
  if (e.input.empty()) throw DataError("trace '" + trace.id + "' has no calls");
  e.family = family_index(trace.family);
  // The FAP target follows the same truncated view of the trace as the input.
  Trace seen{trace.id, trace.family,
             {trace.calls.begin(), trace.calls.begin() + static_cast<std::ptrdiff_t>(e.input.size())}};
  e.fap = fap_target_sequence(extract_fap_vector(seen), fap_vocab_);
  e.reconstruction = e.input;
  e.reconstruction.push_back(Vocabulary::kEos);
  return e;
}

std::vector<Example> Model::make_examples(const std::vector<Trace>& traces, std::size_t max_len) const {
  std::vector<Example> out;
  out.reserve(traces.size());
  for (const Trace& t : traces) out.push_back(make_example(t, max_len));
  return out;
}

Tensor Model::contexts(const std::vector<const IndexSequence*>& inputs) const {
  const std::size_t n = inputs.size(), hid = config_.hidden_dim;
  Tensor out(n, hid);
  const std::size_t batches = (n + kInferenceBatch - 1) / kInferenceBatch;
#if defined(FAPLEARN_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * kInferenceBatch, hi = std::min(n, lo + kInferenceBatch);
    std::span<const IndexSequence* const> part(inputs.data() + lo, hi - lo);
    const Tensor c = encoder.encode(SequenceBatch(part));
    std::copy(c.data().begin(), c.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(lo * hid));
  }
  return out;
}

Tensor Model::contexts(const std::vector<Example>& examples) const {
  std::vector<const IndexSequence*> inputs;
  inputs.reserve(examples.size());
  for (const Example& e : examples) inputs.push_back(&e.input);
  return contexts(inputs);
}

std::vector<std::uint32_t> Model::predict_families(const Tensor& contexts) const {
  std::vector<std::uint32_t> out;
  out.reserve(contexts.rows());
  for (const IndexSequence& s : classifier.decode_greedy(contexts, 1)) out.push_back(s.front());
  return out;
}

std::vector<IndexSequence> Model::predict_faps(const Tensor& contexts) const {
  return fap.decode_greedy(contexts, kFapDecodeSteps);
}

numeric::Checkpoint Model::to_checkpoint() const {
  numeric::Checkpoint ckpt = numeric::snapshot(parameters());
  std::vector<std::pair<std::string, std::vector<std::string>>> m;
  m.push_back({"embed_dim", {std::to_string(config_.embed_dim)}});
  m.push_back({"hidden_dim", {std::to_string(config_.hidden_dim)}});
  m.push_back({"bidirectional", {config_.bidirectional ? "1" : "0"}});
  m.push_back({"api_vocab_size", {std::to_string(api_vocab_.size())}});
  auto tokens = api_vocab_.tokens();
  for (const auto& t : tokens) check_token(t);
  m.push_back({"api_vocab", tokens});
  for (const auto& f : families_) check_token(f);
  m.push_back({"families", families_});
  m.push_back({"fap_alphabet", fap_vocab_.tokens()});
  m.push_back({"decoders", {"reconstruction", "cls", "fap"}});
  for (const auto& [key, values] : metadata) {
    check_token(key);
    for (const auto& v : values) check_token(v);
    m.push_back({"meta." + key, values});
  }
  ckpt.manifest = std::move(m);
  return ckpt;
}

Model Model::from_checkpoint(const numeric::Checkpoint& ckpt) {
  ModelConfig config;
  config.embed_dim = require_size(ckpt, "embed_dim");
  config.hidden_dim = require_size(ckpt, "hidden_dim");
  config.bidirectional = require_size(ckpt, "bidirectional") != 0;
  if (config.embed_dim == 0 || config.hidden_dim == 0) throw DataError("checkpoint has zero dimensions");
  Vocabulary vocab = Vocabulary::from_tokens(require(ckpt, "api_vocab"));
  if (vocab.size() != require_size(ckpt, "api_vocab_size")) throw DataError("checkpoint vocabulary size mismatch");
  if (require(ckpt, "fap_alphabet") != fap_vocabulary().tokens()) {
    throw DataError("checkpoint FAP alphabet differs from the standard table");
  }
  Model model(config, std::move(vocab), require(ckpt, "families"));
  try {
    numeric::restore(ckpt, model.parameters());
  } catch (const NumericError& e) {
    throw DataError(std::string("checkpoint does not fit the model: ") + e.what());
  }
  for (const auto& [key, values] : ckpt.manifest) {
    if (key.rfind("meta.", 0) == 0) model.metadata.push_back({key.substr(5), values});
  }
  return model;
}

void Model::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  numeric::write_checkpoint(out, to_checkpoint());
  if (!out) throw DataError("failed writing checkpoint '" + path + "'");
}

Model Model::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  return from_checkpoint(numeric::read_checkpoint(in));
}

}  // namespace faplearn
