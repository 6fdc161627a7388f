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

#include "faplearn/gru.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "faplearn/error.hpp"
#include "faplearn/kernels.hpp"
#include "faplearn/ops.hpp"

namespace faplearn {

namespace nm = numeric;
namespace kn = kernels::parallel;

namespace {

void uniform_fill(Tensor& t, Rng& rng, double bound) {
  for (double& v : t.data()) v = rng.uniform(-bound, bound);
}

void add_bias_rows(Tensor& m, const Tensor& bias) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += bias[j];
  }
}

Tensor gather(const Tensor& table, std::span<const std::uint32_t> indices) {
  Tensor out(indices.size(), table.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= table.rows()) throw IndexOutOfVocab(indices[r], table.rows());
    std::copy_n(table.row(indices[r]).begin(), table.cols(), out.row(r).begin());
  }
  return out;
}

Tensor as_matrix(const Tensor& t) {
  if (t.rank() == 2) return t;
  return Tensor::matrix(1, t.size(), std::vector<double>(t.data().begin(), t.data().end()));
}

}  // namespace

GruCell::GruCell(const std::string& prefix, std::size_t input_size, std::size_t hidden_size)
    : w_z(prefix + ".w_z", Tensor(input_size, hidden_size)),
      w_r(prefix + ".w_r", Tensor(input_size, hidden_size)),
      w_h(prefix + ".w_h", Tensor(input_size, hidden_size)),
      u_z(prefix + ".u_z", Tensor(hidden_size, hidden_size)),
      u_r(prefix + ".u_r", Tensor(hidden_size, hidden_size)),
      u_h(prefix + ".u_h", Tensor(hidden_size, hidden_size)),
      b_z(prefix + ".b_z", Tensor(hidden_size)),
      b_r(prefix + ".b_r", Tensor(hidden_size)),
      b_h(prefix + ".b_h", Tensor(hidden_size)),
      input_size_(input_size),
      hidden_size_(hidden_size) {}

void GruCell::initialize(Rng& rng, double update_bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_size_));
  for (Parameter* p : {&w_z, &w_r, &w_h, &u_z, &u_r, &u_h}) uniform_fill(p->value, rng, bound);
  b_z.value.fill(update_bias);
  b_r.value.fill(0.0);
  b_h.value.fill(0.0);
}

std::vector<Parameter*> GruCell::parameters() {
  return {&w_z, &w_r, &w_h, &u_z, &u_r, &u_h, &b_z, &b_r, &b_h};
}

std::vector<const Parameter*> GruCell::parameters() const {
  return {&w_z, &w_r, &w_h, &u_z, &u_r, &u_h, &b_z, &b_r, &b_h};
}

Tensor gru_forward(const GruCell& cell, const Tensor& x, const Tensor& h_prev, std::span<const double> mask,
                   GruStepCache* cache) {
  const std::size_t batch = x.rows();
  const std::size_t in = cell.input_size();
  const std::size_t hid = cell.hidden_size();
  if (x.rank() != 2 || h_prev.rank() != 2 || x.cols() != in || h_prev.cols() != hid || h_prev.rows() != batch) {
    throw ShapeMismatch("gru_step: x " + x.shape_string() + ", h " + h_prev.shape_string() + " for cell " +
                        std::to_string(in) + "->" + std::to_string(hid));
  }
  if (!mask.empty() && mask.size() != batch) throw ShapeMismatch("gru_step: mask length");

  Tensor z(batch, hid), r(batch, hid), cand(batch, hid);
  kn::gemm_nn(batch, hid, in, x.data(), cell.w_z.value.data(), z.data(), false);
  kn::gemm_nn(batch, hid, hid, h_prev.data(), cell.u_z.value.data(), z.data(), true);
  kn::gemm_nn(batch, hid, in, x.data(), cell.w_r.value.data(), r.data(), false);
  kn::gemm_nn(batch, hid, hid, h_prev.data(), cell.u_r.value.data(), r.data(), true);
  add_bias_rows(z, cell.b_z.value);
  add_bias_rows(r, cell.b_r.value);
  for (double& v : z.data()) v = nm::sigmoid(v);
  for (double& v : r.data()) v = nm::sigmoid(v);

  Tensor rh = r;
  for (std::size_t i = 0; i < rh.size(); ++i) rh[i] *= h_prev[i];
  kn::gemm_nn(batch, hid, in, x.data(), cell.w_h.value.data(), cand.data(), false);
  kn::gemm_nn(batch, hid, hid, rh.data(), cell.u_h.value.data(), cand.data(), true);
  add_bias_rows(cand, cell.b_h.value);
  for (double& v : cand.data()) v = std::tanh(v);

  Tensor out(batch, hid);
  for (std::size_t b = 0; b < batch; ++b) {
    const bool active = mask.empty() || mask[b] != 0.0;
    for (std::size_t j = 0; j < hid; ++j) {
      const std::size_t i = b * hid + j;
      out[i] = active ? (1.0 - z[i]) * h_prev[i] + z[i] * cand[i] : h_prev[i];
    }
  }
  if (cache) {
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->candidate = std::move(cand);
    cache->reset_hidden = std::move(rh);
  }
  return out;
}

Var gru_step(Tape& tape, GruCell& cell, Var x, Var h_prev, std::span<const double> mask) {
  auto cache = std::make_shared<GruStepCache>();
  Tensor out = gru_forward(cell, tape.value(x), tape.value(h_prev), mask, tape.grad_enabled() ? cache.get() : nullptr);

  const std::array<Var, 9> pv = {tape.parameter(cell.w_z), tape.parameter(cell.w_r), tape.parameter(cell.w_h),
                                 tape.parameter(cell.u_z), tape.parameter(cell.u_r), tape.parameter(cell.u_h),
                                 tape.parameter(cell.b_z), tape.parameter(cell.b_r), tape.parameter(cell.b_h)};
  bool needs = tape.requires_grad(x) || tape.requires_grad(h_prev);
  for (Var v : pv) needs = needs || tape.requires_grad(v);

  std::vector<double> mask_copy(mask.begin(), mask.end());
  const std::size_t batch = out.rows(), in = cell.input_size(), hid = cell.hidden_size();
  const GruCell* cp = &cell;
  return tape.record(std::move(out), needs, [=, mask = std::move(mask_copy)](Tape& tp, const Tensor& g) {
    const Tensor& xv = tp.value(x);
    const Tensor& hv = tp.value(h_prev);
    const Tensor& z = cache->z;
    const Tensor& r = cache->r;
    const Tensor& cand = cache->candidate;

    Tensor dh(batch, hid);  // gradient reaching h_prev
    Tensor daz(batch, hid), dar(batch, hid), dah(batch, hid);
    for (std::size_t b = 0; b < batch; ++b) {
      const bool active = mask.empty() || mask[b] != 0.0;
      for (std::size_t j = 0; j < hid; ++j) {
        const std::size_t i = b * hid + j;
        if (!active) {
          dh[i] = g[i];
          continue;
        }
        const double gz = g[i] * (cand[i] - hv[i]);
        const double gc = g[i] * z[i];
        dh[i] = g[i] * (1.0 - z[i]);
        daz[i] = gz * z[i] * (1.0 - z[i]);
        dah[i] = gc * (1.0 - cand[i] * cand[i]);
      }
    }
    // d(r . h) = dah U_h^T
    Tensor drh(batch, hid);
    kn::gemm_nt(batch, hid, hid, dah.data(), cp->u_h.value.data(), drh.data(), false);
    for (std::size_t i = 0; i < drh.size(); ++i) {
      dar[i] = drh[i] * hv[i] * r[i] * (1.0 - r[i]);
      dh[i] += drh[i] * r[i];
    }

    const Tensor* gates[3] = {&daz, &dar, &dah};
    for (int k = 0; k < 3; ++k) {
      const Var wv = pv[k], uv = pv[3 + k], bv = pv[6 + k];
      if (tp.requires_grad(wv)) kn::gemm_tn(batch, hid, in, xv.data(), gates[k]->data(), tp.grad(wv).data(), true);
      if (tp.requires_grad(uv)) {
        const Tensor& lhs = k == 2 ? cache->reset_hidden : hv;
        kn::gemm_tn(batch, hid, hid, lhs.data(), gates[k]->data(), tp.grad(uv).data(), true);
      }
      if (tp.requires_grad(bv)) kernels::add_column_sums(batch, hid, gates[k]->data(), tp.grad(bv).data());
    }
    if (tp.requires_grad(x)) {
      Tensor& gx = tp.grad(x);
      kn::gemm_nt(batch, in, hid, daz.data(), cp->w_z.value.data(), gx.data(), true);
      kn::gemm_nt(batch, in, hid, dar.data(), cp->w_r.value.data(), gx.data(), true);
      kn::gemm_nt(batch, in, hid, dah.data(), cp->w_h.value.data(), gx.data(), true);
    }
    if (tp.requires_grad(h_prev)) {
      kn::gemm_nt(batch, hid, hid, daz.data(), cp->u_z.value.data(), dh.data(), true);
      kn::gemm_nt(batch, hid, hid, dar.data(), cp->u_r.value.data(), dh.data(), true);
      Tensor& gh = tp.grad(h_prev);
      for (std::size_t i = 0; i < dh.size(); ++i) gh[i] += dh[i];
    }
  });
}

Var gru_step_composed(Tape& tape, GruCell& cell, Var x, Var h_prev) {
  auto gate = [&](Parameter& w, Parameter& u, Parameter& b, Var hidden) {
    Var a = nm::add(tape, nm::matmul(tape, x, tape.parameter(w)), nm::matmul(tape, hidden, tape.parameter(u)));
    return nm::add_bias(tape, a, tape.parameter(b));
  };
  Var z = nm::sigmoid(tape, gate(cell.w_z, cell.u_z, cell.b_z, h_prev));
  Var r = nm::sigmoid(tape, gate(cell.w_r, cell.u_r, cell.b_r, h_prev));
  Var rh = nm::mul(tape, r, h_prev);
  Var cand = nm::tanh(tape, gate(cell.w_h, cell.u_h, cell.b_h, rh));
  return nm::add(tape, nm::mul(tape, nm::one_minus(tape, z), h_prev), nm::mul(tape, z, cand));
}

SequenceBatch::SequenceBatch(std::span<const IndexSequence* const> sequences) {
  lengths_.reserve(sequences.size());
  for (const IndexSequence* s : sequences) {
    lengths_.push_back(s->size());
    max_length_ = std::max(max_length_, s->size());
  }
  const std::size_t n = sequences.size();
  tokens_.assign(max_length_ * n, Vocabulary::kPad);
  mask_.assign(max_length_ * n, 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t t = 0; t < lengths_[b]; ++t) {
      tokens_[t * n + b] = (*sequences[b])[t];
      mask_[t * n + b] = 1.0;
    }
  }
}

SequenceBatch SequenceBatch::of(const std::vector<IndexSequence>& sequences) {
  std::vector<const IndexSequence*> ptrs;
  for (const auto& s : sequences) ptrs.push_back(&s);
  return SequenceBatch(ptrs);
}

std::uint32_t SequenceBatch::max_token() const {
  return tokens_.empty() ? 0 : *std::max_element(tokens_.begin(), tokens_.end());
}

Encoder::Encoder(const EncoderConfig& config)
    : embedding("encoder.embedding", Tensor(config.vocab_size, config.embed_dim)),
      forward_cell("encoder.fwd", config.embed_dim, config.hidden_dim),
      config_(config) {
  if (config.bidirectional) {
    backward_cell.emplace("encoder.bwd", config.embed_dim, config.hidden_dim);
    projection.emplace("encoder.projection", Tensor(2 * config.hidden_dim, config.hidden_dim));
    projection_bias.emplace("encoder.projection_bias", Tensor(config.hidden_dim));
  }
}

void Encoder::initialize(Rng& rng) {
  uniform_fill(embedding.value, rng, 0.5);
  forward_cell.initialize(rng, config_.update_bias);
  if (backward_cell) {
    backward_cell->initialize(rng, config_.update_bias);
    uniform_fill(projection->value, rng, 1.0 / std::sqrt(2.0 * config_.hidden_dim));
    projection_bias->value.fill(0.0);
  }
}

std::vector<Parameter*> Encoder::parameters() {
  std::vector<Parameter*> out{&embedding};
  for (Parameter* p : forward_cell.parameters()) out.push_back(p);
  if (backward_cell) {
    for (Parameter* p : backward_cell->parameters()) out.push_back(p);
    out.push_back(&*projection);
    out.push_back(&*projection_bias);
  }
  return out;
}

std::vector<const Parameter*> Encoder::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<Encoder*>(this)->parameters()) out.push_back(p);
  return out;
}

void Encoder::check_batch(const SequenceBatch& batch) const {
  if (batch.size() == 0) throw ShapeMismatch("encode: empty batch");
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (batch.length(b) == 0) throw ShapeMismatch("encode: empty sequence");
  }
  if (batch.max_token() >= config_.vocab_size) throw IndexOutOfVocab(batch.max_token(), config_.vocab_size);
}

Var Encoder::encode(Tape& tape, const SequenceBatch& batch) {
  check_batch(batch);
  const std::size_t n = batch.size(), steps = batch.max_length();
  Var emb = tape.parameter(embedding);
  Var zeros = tape.constant(Tensor(n, config_.hidden_dim));
  Var h = zeros;
  for (std::size_t t = 0; t < steps; ++t) {
    h = gru_step(tape, forward_cell, nm::gather_rows(tape, emb, batch.step(t)), h, batch.mask(t));
  }
  if (!backward_cell) return h;
  Var hb = zeros;
  for (std::size_t t = steps; t-- > 0;) {
    hb = gru_step(tape, *backward_cell, nm::gather_rows(tape, emb, batch.step(t)), hb, batch.mask(t));
  }
  Var joined = nm::concat_cols(tape, h, hb);
  return nm::add_bias(tape, nm::matmul(tape, joined, tape.parameter(*projection)), tape.parameter(*projection_bias));
}

Tensor Encoder::encode(const SequenceBatch& batch) const {
  check_batch(batch);
  const std::size_t n = batch.size(), steps = batch.max_length(), hid = config_.hidden_dim;
  Tensor h(n, hid);
  for (std::size_t t = 0; t < steps; ++t) {
    h = gru_forward(forward_cell, gather(embedding.value, batch.step(t)), h, batch.mask(t));
  }
  if (!backward_cell) return h;
  Tensor hb(n, hid);
  for (std::size_t t = steps; t-- > 0;) {
    hb = gru_forward(*backward_cell, gather(embedding.value, batch.step(t)), hb, batch.mask(t));
  }
  Tensor joined(n, 2 * hid);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(h.row(r).begin(), hid, joined.row(r).begin());
    std::copy_n(hb.row(r).begin(), hid, joined.row(r).begin() + hid);
  }
  Tensor c = nm::matmul(joined, projection->value);
  add_bias_rows(c, projection_bias->value);
  return c;
}

Tensor Encoder::encode(const IndexSequence& sequence) const {
  const IndexSequence* one[] = {&sequence};
  Tensor c = encode(SequenceBatch(one));
  return Tensor::vector(std::vector<double>(c.data().begin(), c.data().end()));
}

const char* decoder_kind_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::reconstruction: return "reconstruction";
    case DecoderKind::classification: return "cls";
    case DecoderKind::fap: return "fap";
  }
  return "?";
}

Decoder::Decoder(const std::string& prefix, const DecoderConfig& config)
    : embedding(prefix + ".embedding", Tensor(config.input_symbols, config.embed_dim)),
      cell(prefix + ".cell", config.embed_dim, config.hidden_dim),
      output_weight(prefix + ".output_weight", Tensor(config.hidden_dim, config.output_symbols)),
      output_bias(prefix + ".output_bias", Tensor(config.output_symbols)),
      config_(config) {
  if (config.go >= config.input_symbols) throw ShapeMismatch("decoder: GO symbol outside the input alphabet");
  if (config.kind == DecoderKind::classification && config.eos) {
    throw ShapeMismatch("decoder: classification decoders have no EOS");
  }
}

void Decoder::initialize(Rng& rng) {
  uniform_fill(embedding.value, rng, 0.5);
  cell.initialize(rng);
  uniform_fill(output_weight.value, rng, 1.0 / std::sqrt(static_cast<double>(config_.hidden_dim)));
  output_bias.value.fill(0.0);
}

std::vector<Parameter*> Decoder::parameters() {
  std::vector<Parameter*> out{&embedding};
  for (Parameter* p : cell.parameters()) out.push_back(p);
  out.push_back(&output_weight);
  out.push_back(&output_bias);
  return out;
}

std::vector<const Parameter*> Decoder::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<Decoder*>(this)->parameters()) out.push_back(p);
  return out;
}

void Decoder::check_targets(const SequenceBatch& targets) const {
  if (targets.size() == 0 || targets.max_length() == 0) throw ShapeMismatch("decoder: empty target");
  if (config_.kind == DecoderKind::classification && targets.max_length() != 1) {
    throw ShapeMismatch("decoder: classification targets have length 1");
  }
  if (targets.max_token() >= config_.output_symbols) {
    throw IndexOutOfVocab(targets.max_token(), config_.output_symbols);
  }
}

std::vector<Var> Decoder::logits_teacher_forced(Tape& tape, Var context, const SequenceBatch& targets) {
  check_targets(targets);
  const std::size_t n = targets.size();
  if (tape.value(context).rows() != n || tape.value(context).cols() != config_.hidden_dim) {
    throw ShapeMismatch("decoder: context shape " + tape.value(context).shape_string());
  }
  Var emb = tape.parameter(embedding);
  Var w = tape.parameter(output_weight);
  Var bias = tape.parameter(output_bias);
  const std::vector<std::uint32_t> go(n, config_.go);
  std::vector<Var> logits;
  Var h = context;
  for (std::size_t t = 0; t < targets.max_length(); ++t) {
    Var x = nm::gather_rows(tape, emb, t == 0 ? std::span<const std::uint32_t>(go) : targets.step(t - 1));
    h = gru_step(tape, cell, x, h);
    logits.push_back(nm::add_bias(tape, nm::matmul(tape, h, w), bias));
  }
  return logits;
}

std::vector<Var> Decoder::decode_teacher_forced(Tape& tape, Var context, const SequenceBatch& targets) {
  auto logits = logits_teacher_forced(tape, context, targets);
  for (Var& v : logits) v = nm::softmax(tape, v);
  return logits;
}

Var Decoder::sequence_loss(Tape& tape, Var context, const SequenceBatch& targets) {
  auto logits = logits_teacher_forced(tape, context, targets);
  Var total;
  for (std::size_t t = 0; t < logits.size(); ++t) {
    Var step = nm::softmax_cross_entropy(tape, logits[t], targets.step(t), targets.mask(t));
    total = total.valid() ? nm::add(tape, total, step) : step;
  }
  return nm::scale(tape, total, 1.0 / static_cast<double>(targets.size()));
}

std::vector<IndexSequence> Decoder::decode_greedy(const Tensor& contexts, std::size_t max_len,
                                                  double logit_scale) const {
  Tensor h = as_matrix(contexts);
  if (h.cols() != config_.hidden_dim) throw ShapeMismatch("decode_greedy: context width");
  const std::size_t n = h.rows();
  const std::size_t steps = config_.kind == DecoderKind::classification ? 1 : max_len;
  std::vector<std::uint32_t> inputs(n, config_.go);
  std::vector<bool> done(n, false);
  std::vector<IndexSequence> out(n);
  for (std::size_t s = 0; s < steps; ++s) {
    h = gru_forward(cell, gather(embedding.value, inputs), h);
    Tensor logits = nm::matmul(h, output_weight.value);
    add_bias_rows(logits, output_bias.value);
    if (logit_scale != 1.0) {
      for (double& v : logits.data()) v *= logit_scale;
    }
    const Tensor q = nm::softmax(logits);
    bool all_done = true;
    for (std::size_t b = 0; b < n; ++b) {
      if (done[b]) continue;
      auto row = q.row(b);
      const auto best = static_cast<std::uint32_t>(std::max_element(row.begin(), row.end()) - row.begin());
      if (config_.eos && best == *config_.eos) {
        done[b] = true;
        continue;
      }
      out[b].push_back(best);
      inputs[b] = best;
      all_done = false;
    }
    if (all_done) break;
  }
  return out;
}

IndexSequence Decoder::decode_greedy_one(const Tensor& context, std::size_t max_len) const {
  return decode_greedy(context, max_len).front();
}

}  // namespace faplearn
