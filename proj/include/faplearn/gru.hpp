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

#ifndef FAPLEARN_GRU_HPP
#define FAPLEARN_GRU_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faplearn/corpus.hpp"
#include "faplearn/rng.hpp"
#include "faplearn/tape.hpp"
#include "faplearn/tensor.hpp"

namespace faplearn {

using numeric::Parameter;
using numeric::Tape;
using numeric::Tensor;
using numeric::Var;

// Gated recurrent unit, row-vector convention (x is 1 x E, h is 1 x H):
//
//   z  = sigmoid(x W_z + h U_z + b_z)
//   r  = sigmoid(x W_r + h U_r + b_r)
//   h~ = tanh(x W_h + (r . h) U_h + b_h)
//   h' = (1 - z) . h + z . h~
//
// W_* are stored E x H and U_* H x H so batched rows multiply on the left.
class GruCell {
 public:
  GruCell(const std::string& prefix, std::size_t input_size, std::size_t hidden_size);

  std::size_t input_size() const { return input_size_; }
  std::size_t hidden_size() const { return hidden_size_; }

  // Uniform(-1/sqrt(H), 1/sqrt(H)) weights, zero reset and candidate biases,
  // update-gate bias set to `update_bias`. A negative value starts the cell
  // close to copying its state forward.
  void initialize(Rng& rng, double update_bias = 0.0);
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  Parameter w_z, w_r, w_h;
  Parameter u_z, u_r, u_h;
  Parameter b_z, b_r, b_h;

 private:
  std::size_t input_size_;
  std::size_t hidden_size_;
};

// Intermediates of one step, kept for the backward pass.
struct GruStepCache {
  Tensor z;
  Tensor r;
  Tensor candidate;
  Tensor reset_hidden;
};

// One batched step: x is B x E, h_prev is B x H. Rows whose mask entry is 0
// carry h_prev through unchanged (padding). Empty mask means all rows step.
Tensor gru_forward(const GruCell& cell, const Tensor& x, const Tensor& h_prev,
                   std::span<const double> mask = {}, GruStepCache* cache = nullptr);

// gru_forward as a single tape node with a hand-written backward.
Var gru_step(Tape& tape, GruCell& cell, Var x, Var h_prev, std::span<const double> mask = {});

// The same step assembled from primitive tape ops. Slower; used to cross-check
// the fused node.
Var gru_step_composed(Tape& tape, GruCell& cell, Var x, Var h_prev);

// A padded batch of index sequences, stored time-major.
class SequenceBatch {
 public:
  SequenceBatch() = default;
  explicit SequenceBatch(std::span<const IndexSequence* const> sequences);
  static SequenceBatch of(const std::vector<IndexSequence>& sequences);

  std::size_t size() const { return lengths_.size(); }
  std::size_t max_length() const { return max_length_; }
  std::size_t length(std::size_t b) const { return lengths_[b]; }
  // Token of every row at step t (PAD beyond a row's end).
  std::span<const std::uint32_t> step(std::size_t t) const {
    return {tokens_.data() + t * size(), size()};
  }
  // 1 for rows still inside their sequence at step t, else 0.
  std::span<const double> mask(std::size_t t) const {
    return {mask_.data() + t * size(), size()};
  }
  std::uint32_t max_token() const;

 private:
  std::size_t max_length_ = 0;
  std::vector<std::size_t> lengths_;
  std::vector<std::uint32_t> tokens_;
  std::vector<double> mask_;
};

struct EncoderConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 128;
  bool bidirectional = false;
  double update_bias = 0.0;  // initial update-gate bias of the encoder cells
};

// Embedding + GRU over the input sequence. The context vector C is the final
// hidden state, or for the bidirectional variant a linear projection of the
// concatenated forward and backward final states down to H.
class Encoder {
 public:
  explicit Encoder(const EncoderConfig& config);

  const EncoderConfig& config() const { return config_; }
  void initialize(Rng& rng);
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  // B x H contexts on the tape.
  Var encode(Tape& tape, const SequenceBatch& batch);
  // Inference without a tape; bitwise identical to the taped forward.
  Tensor encode(const SequenceBatch& batch) const;
  // Length-H context of one sequence.
  Tensor encode(const IndexSequence& sequence) const;

  Parameter embedding;
  GruCell forward_cell;
  std::optional<GruCell> backward_cell;
  std::optional<Parameter> projection;
  std::optional<Parameter> projection_bias;

 private:
  void check_batch(const SequenceBatch& batch) const;

  EncoderConfig config_;
};

enum class DecoderKind { reconstruction, classification, fap };

const char* decoder_kind_name(DecoderKind kind);

struct DecoderConfig {
  DecoderKind kind = DecoderKind::fap;
  std::size_t input_symbols = 0;   // rows of the decoder embedding
  std::size_t output_symbols = 0;  // softmax width
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 128;
  std::uint32_t go = 1;
  std::optional<std::uint32_t> eos;  // none for classification
};

// GRU decoder whose hidden state starts at the context vector and whose first
// input is the GO symbol. Classification decoders emit exactly one symbol.
class Decoder {
 public:
  Decoder(const std::string& prefix, const DecoderConfig& config);

  const DecoderConfig& config() const { return config_; }
  void initialize(Rng& rng);
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  // Teacher forcing: step inputs are GO, y_1, ..., y_{L-1}. Returns the
  // B x V_out logits of each of the L steps.
  std::vector<Var> logits_teacher_forced(Tape& tape, Var context, const SequenceBatch& targets);
  // As above, softmax-normalized.
  std::vector<Var> decode_teacher_forced(Tape& tape, Var context, const SequenceBatch& targets);
  // (1/B) * sum over rows and non-PAD steps of -log q(y_t).
  Var sequence_loss(Tape& tape, Var context, const SequenceBatch& targets);

  // Greedy decoding of every row of `contexts` (B x H). Stops a row at EOS
  // (not returned) or after max_len symbols. Ties go to the lowest index.
  // `logit_scale` multiplies the logits before the softmax.
  std::vector<IndexSequence> decode_greedy(const Tensor& contexts, std::size_t max_len,
                                           double logit_scale = 1.0) const;
  IndexSequence decode_greedy_one(const Tensor& context, std::size_t max_len) const;

  Parameter embedding;
  GruCell cell;
  Parameter output_weight;  // H x V_out
  Parameter output_bias;

 private:
  void check_targets(const SequenceBatch& targets) const;

  DecoderConfig config_;
};

}  // namespace faplearn

#endif  // FAPLEARN_GRU_HPP
