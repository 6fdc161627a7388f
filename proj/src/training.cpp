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

#include "faplearn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "faplearn/error.hpp"
#include "faplearn/ops.hpp"

namespace faplearn {

namespace nm = numeric;

namespace {

constexpr std::size_t kEvalBatch = 64;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string, std::less<>> kKnownKeys = {
    "batch_size", "pretrain_epochs", "epochs",  "learning_rate", "beta1",     "beta2",
    "adam_eps",   "optimizer",       "clip_norm", "lambda_fap",  "seed",      "freeze_encoder",
    "max_len",    "patience",        "stop_loss", "embed_dim",   "hidden_dim", "bidirectional",
    "update_bias", "early_stop"};

std::size_t positive_size(const ConfigSection& s, const char* key, std::size_t fallback, bool allow_zero) {
  const long long v = s.get_int(key, static_cast<long long>(fallback));
  if (v < 0 || (!allow_zero && v == 0)) {
    throw DataError(std::string("config: ") + key + " must be " + (allow_zero ? "non-negative" : "positive"));
  }
  return static_cast<std::size_t>(v);
}

SequenceBatch batch_of(std::span<const Example* const> batch, IndexSequence Example::*field) {
  std::vector<const IndexSequence*> seqs;
  seqs.reserve(batch.size());
  for (const Example* e : batch) seqs.push_back(&(e->*field));
  return SequenceBatch(seqs);
}

Tensor rows_of(const Tensor& m, std::span<const std::size_t> rows) {
  Tensor out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(m.row(rows[i]).begin(), m.cols(), out.row(i).begin());
  }
  return out;
}

double scalar(const Tape& tape, Var v) { return v.valid() ? tape.value(v)[0] : 0.0; }

class Stepper {
 public:
  Stepper(std::vector<Parameter*> params, const TrainConfig& config)
      : params_(std::move(params)), config_(config) {}

  const std::vector<Parameter*>& params() const { return params_; }

  void step() {
    for (const Parameter* p : params_) {
      if (!p->grad.all_finite()) throw DivergedLoss("non-finite gradient in " + p->name);
    }
    clip_grad_norm(params_, config_.clip_norm);
    if (config_.optimizer == OptimizerKind::adam) {
      adam_step(params_, adam_, config_.learning_rate, config_.adam);
    } else {
      sgd_step(params_, config_.learning_rate);
    }
  }

 private:
  std::vector<Parameter*> params_;
  const TrainConfig& config_;
  AdamState adam_;
};

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const NonFiniteValue& e) {
    throw DivergedLoss(std::string("training diverged: ") + e.what());
  }
}

struct ValidationResult {
  double cls_loss = 0.0;
  double fap_loss = 0.0;
  double cls_acc = 0.0;
  double fap_acc = 0.0;
};

ValidationResult validate_multitask(Model& model, const std::vector<Example>& validation,
                                    const TaskWeights& weights, const Tensor& contexts) {
  ValidationResult r;
  const std::size_t n = validation.size();
  std::vector<const Example*> all;
  for (const Example& e : validation) all.push_back(&e);
  for (std::size_t lo = 0; lo < n; lo += kEvalBatch) {
    const std::size_t hi = std::min(n, lo + kEvalBatch);
    std::vector<std::size_t> rows(hi - lo);
    std::iota(rows.begin(), rows.end(), lo);
    const Tensor ctx = rows_of(contexts, rows);
    Tape tape(false);
    BatchLoss bl = multitask_loss(tape, model, std::span(all).subspan(lo, hi - lo), weights, &ctx);
    r.cls_loss += scalar(tape, bl.cls) * static_cast<double>(hi - lo);
    r.fap_loss += scalar(tape, bl.fap) * static_cast<double>(hi - lo);
  }
  if (weights.cls != 0.0) {
    const auto pred = model.predict_families(contexts);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < n; ++i) ok += pred[i] == validation[i].family;
    r.cls_acc = static_cast<double>(ok) / static_cast<double>(n);
  }
  if (weights.fap != 0.0) {
    const auto pred = model.predict_faps(contexts);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < n; ++i) ok += fap_exact_match(pred[i], validation[i].fap);
    r.fap_acc = static_cast<double>(ok) / static_cast<double>(n);
  }
  r.cls_loss /= static_cast<double>(n);
  r.fap_loss /= static_cast<double>(n);
  return r;
}

std::vector<Parameter*> concat(std::vector<Parameter*> a, const std::vector<Parameter*>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw DataError("config: batch_size must be at least 1");
  if (!(learning_rate > 0.0)) throw DataError("config: learning_rate must be positive");
  if (!(lambda_fap >= 0.0)) throw DataError("config: lambda_fap must be non-negative");
  if (max_len < 1) throw DataError("config: max_len must be at least 1");
  if (model.embed_dim < 1 || model.hidden_dim < 1) throw DataError("config: model sizes must be positive");
  if (adam.beta1 < 0.0 || adam.beta1 >= 1.0 || adam.beta2 < 0.0 || adam.beta2 >= 1.0 || !(adam.epsilon > 0.0)) {
    throw DataError("config: invalid Adam hyperparameters");
  }
}

TrainConfig train_config_from(const ConfigSection& s, TrainConfig c) {
  for (const auto& e : s.entries()) {
    if (!kKnownKeys.contains(e.key)) throw MalformedLine(e.line, "unknown training key '" + e.key + "'");
  }
  c.batch_size = positive_size(s, "batch_size", c.batch_size, false);
  c.pretrain_epochs = positive_size(s, "pretrain_epochs", c.pretrain_epochs, true);
  c.epochs = positive_size(s, "epochs", c.epochs, true);
  c.learning_rate = s.get_double("learning_rate", c.learning_rate);
  c.adam.beta1 = s.get_double("beta1", c.adam.beta1);
  c.adam.beta2 = s.get_double("beta2", c.adam.beta2);
  c.adam.epsilon = s.get_double("adam_eps", c.adam.epsilon);
  const std::string opt = s.get_string("optimizer", c.optimizer == OptimizerKind::adam ? "adam" : "sgd");
  if (opt == "adam") {
    c.optimizer = OptimizerKind::adam;
  } else if (opt == "sgd") {
    c.optimizer = OptimizerKind::sgd;
  } else {
    throw DataError("config: optimizer must be adam or sgd, got '" + opt + "'");
  }
  c.clip_norm = s.get_double("clip_norm", c.clip_norm);
  c.lambda_fap = s.get_double("lambda_fap", c.lambda_fap);
  const long long seed = s.get_int("seed", static_cast<long long>(c.seed));
  if (seed < 0) throw DataError("config: seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.freeze_encoder = s.get_bool("freeze_encoder", c.freeze_encoder);
  c.max_len = positive_size(s, "max_len", c.max_len, false);
  c.patience = positive_size(s, "patience", c.patience, true);
  c.stop_loss = s.get_double("stop_loss", c.stop_loss);
  const std::string stop = s.get_string("early_stop", c.early_stop == EarlyStopMetric::cls ? "cls" : "mean");
  if (stop == "cls") {
    c.early_stop = EarlyStopMetric::cls;
  } else if (stop == "mean") {
    c.early_stop = EarlyStopMetric::mean;
  } else {
    throw DataError("config: early_stop must be cls or mean, got '" + stop + "'");
  }
  c.model.embed_dim = positive_size(s, "embed_dim", c.model.embed_dim, false);
  c.model.hidden_dim = positive_size(s, "hidden_dim", c.model.hidden_dim, false);
  c.model.bidirectional = s.get_bool("bidirectional", c.model.bidirectional);
  c.model.update_bias = s.get_double("update_bias", c.model.update_bias);
  c.validate();
  return c;
}

TrainConfig load_train_config(const std::string& path) { return train_config_from(load_config(path).global); }

Regime parse_regime(const std::string& name) {
  if (name == "seq2seq-cls") return Regime::seq2seq_cls;
  if (name == "seq2seq-fap") return Regime::seq2seq_fap;
  if (name == "ae") return Regime::ae;
  if (name == "ae-full") return Regime::ae_full;
  if (name == "multitask") return Regime::multitask;
  throw DataError("unknown regime '" + name + "'");
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::seq2seq_cls: return "seq2seq-cls";
    case Regime::seq2seq_fap: return "seq2seq-fap";
    case Regime::ae: return "ae";
    case Regime::ae_full: return "ae-full";
    case Regime::multitask: return "multitask";
  }
  return "?";
}

void TrainingLog::write_csv(std::ostream& out) const {
  out << "phase,epoch,task,train_loss,val_loss,val_acc\n";
  char buf[64];
  auto num = [&](double v) -> std::string {
    if (std::isnan(v)) return "";
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
  };
  for (const auto& r : records) {
    out << r.phase << ',' << r.epoch << ',' << r.task << ',' << num(r.train_loss) << ',' << num(r.val_loss) << ','
        << (r.val_acc ? num(*r.val_acc) : std::string()) << '\n';
  }
}

BatchLoss multitask_loss(Tape& tape, Model& model, std::span<const Example* const> batch,
                         const TaskWeights& weights, const Tensor* contexts) {
  if (batch.empty()) throw ShapeMismatch("multitask_loss: empty batch");
  if (weights.cls == 0.0 && weights.fap == 0.0) throw DataError("multitask_loss: both task weights are zero");
  Var ctx = contexts ? tape.constant(*contexts) : model.encoder.encode(tape, batch_of(batch, &Example::input));
  BatchLoss out;
  if (weights.cls != 0.0) {
    std::vector<IndexSequence> labels;
    for (const Example* e : batch) labels.push_back({e->family});
    out.cls = model.classifier.sequence_loss(tape, ctx, SequenceBatch::of(labels));
    out.total = weights.cls == 1.0 ? out.cls : nm::scale(tape, out.cls, weights.cls);
  }
  if (weights.fap != 0.0) {
    out.fap = model.fap.sequence_loss(tape, ctx, batch_of(batch, &Example::fap));
    Var f = weights.fap == 1.0 ? out.fap : nm::scale(tape, out.fap, weights.fap);
    out.total = out.total.valid() ? nm::add(tape, out.total, f) : f;
  }
  return out;
}

Var reconstruction_loss(Tape& tape, Model& model, std::span<const Example* const> batch) {
  Var ctx = model.encoder.encode(tape, batch_of(batch, &Example::input));
  return model.reconstruction.sequence_loss(tape, ctx, batch_of(batch, &Example::reconstruction));
}

PhaseSummary pretrain_autoencoder(Model& model, const std::vector<Example>& train,
                                  const std::vector<Example>& validation, const TrainConfig& config,
                                  TrainingLog& log) {
  config.validate();
  if (train.empty()) throw DataError("pretrain_autoencoder: empty corpus");
  Stepper stepper(concat(model.encoder.parameters(), model.reconstruction.parameters()), config);
  Rng rng = Rng::substream(config.seed, 1);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  PhaseSummary summary;
  for (std::size_t epoch = 1; epoch <= config.pretrain_epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double total = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += config.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + config.batch_size);
      std::vector<const Example*> batch;
      for (std::size_t i = lo; i < hi; ++i) batch.push_back(&train[order[i]]);
      zero_grads(stepper.params());
      const double loss = guarded([&] {
        Tape tape;
        Var l = reconstruction_loss(tape, model, batch);
        tape.backward(l);
        return tape.value(l)[0];
      });
      if (!std::isfinite(loss)) throw DivergedLoss("reconstruction loss is not finite");
      stepper.step();
      total += loss * static_cast<double>(hi - lo);
    }
    zero_grads(stepper.params());
    const double train_loss = total / static_cast<double>(train.size());
    double val_loss = kNaN;
    if (!validation.empty()) {
      val_loss = 0.0;
      std::vector<const Example*> all;
      for (const Example& e : validation) all.push_back(&e);
      for (std::size_t lo = 0; lo < all.size(); lo += kEvalBatch) {
        const std::size_t hi = std::min(all.size(), lo + kEvalBatch);
        Tape tape(false);
        Var l = reconstruction_loss(tape, model, std::span(all).subspan(lo, hi - lo));
        val_loss += tape.value(l)[0] * static_cast<double>(hi - lo);
      }
      val_loss /= static_cast<double>(all.size());
    }
    log.records.push_back({"pretrain", epoch, "reconstruction", train_loss, val_loss, std::nullopt});
    summary.epochs_run = epoch;
    summary.final_train_loss = train_loss;
    if (config.stop_loss > 0.0 && train_loss < config.stop_loss) break;
  }
  return summary;
}

PhaseSummary train_multitask(Model& model, const std::vector<Example>& train,
                             const std::vector<Example>& validation, const TrainConfig& config,
                             const TaskWeights& weights, bool freeze_encoder, TrainingLog& log) {
  config.validate();
  if (train.empty()) throw DataError("train_multitask: empty training split");
  if (weights.cls < 0.0 || weights.fap < 0.0) throw DataError("train_multitask: negative task weight");
  std::vector<Parameter*> params;
  if (!freeze_encoder) params = model.encoder.parameters();
  if (weights.cls != 0.0) params = concat(std::move(params), model.classifier.parameters());
  if (weights.fap != 0.0) params = concat(std::move(params), model.fap.parameters());
  Stepper stepper(std::move(params), config);

  const bool track_cls = weights.cls != 0.0;
  std::optional<Tensor> train_contexts, frozen_val_contexts;
  if (freeze_encoder) {
    train_contexts = model.contexts(train);
    if (!validation.empty()) frozen_val_contexts = model.contexts(validation);
  }

  Rng rng = Rng::substream(config.seed, 2);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  PhaseSummary summary;
  std::optional<nm::Checkpoint> best;
  double best_metric = -1.0, best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double sum_total = 0.0, sum_cls = 0.0, sum_fap = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += config.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + config.batch_size);
      std::span<const std::size_t> rows(order.data() + lo, hi - lo);
      std::vector<const Example*> batch;
      for (std::size_t i : rows) batch.push_back(&train[i]);
      std::optional<Tensor> ctx;
      if (train_contexts) ctx = rows_of(*train_contexts, rows);
      zero_grads(stepper.params());
      const auto [t, c, f] = guarded([&] {
        Tape tape;
        BatchLoss bl = multitask_loss(tape, model, batch, weights, ctx ? &*ctx : nullptr);
        tape.backward(bl.total);
        return std::tuple{scalar(tape, bl.total), scalar(tape, bl.cls), scalar(tape, bl.fap)};
      });
      if (!std::isfinite(t)) throw DivergedLoss("multitask loss is not finite");
      stepper.step();
      const auto n = static_cast<double>(hi - lo);
      sum_total += t * n;
      sum_cls += c * n;
      sum_fap += f * n;
    }
    zero_grads(stepper.params());
    const auto n = static_cast<double>(train.size());
    const double train_total = sum_total / n;

    double metric = 0.0, val_total = kNaN;
    ValidationResult v{kNaN, kNaN, 0.0, 0.0};
    if (!validation.empty()) {
      const Tensor vctx = frozen_val_contexts ? *frozen_val_contexts : model.contexts(validation);
      v = validate_multitask(model, validation, weights, vctx);
      val_total = weights.cls * v.cls_loss + weights.fap * v.fap_loss;
      if (!track_cls) {
        metric = v.fap_acc;
      } else if (config.early_stop == EarlyStopMetric::mean && weights.fap != 0.0) {
        metric = 0.5 * (v.cls_acc + v.fap_acc);
      } else {
        metric = v.cls_acc;
      }
    }
    if (weights.cls != 0.0) {
      log.records.push_back({"decoders", epoch, "cls", sum_cls / n, v.cls_loss,
                             validation.empty() ? std::nullopt : std::optional(v.cls_acc)});
    }
    if (weights.fap != 0.0) {
      log.records.push_back({"decoders", epoch, "fap", sum_fap / n, v.fap_loss,
                             validation.empty() ? std::nullopt : std::optional(v.fap_acc)});
    }
    summary.epochs_run = epoch;
    summary.final_train_loss = train_total;

    if (!validation.empty()) {
      if (metric > best_metric || (metric == best_metric && val_total < best_loss)) {
        best_metric = metric;
        best_loss = val_total;
        best = nm::snapshot(model.parameters());
        summary.best_epoch = epoch;
        summary.best_metric = metric;
        since_best = 0;
      } else {
        ++since_best;
      }
    }
    if (config.stop_loss > 0.0 && train_total < config.stop_loss) break;
    if (config.patience > 0 && since_best >= config.patience) break;
  }
  if (best && summary.best_epoch != summary.epochs_run) nm::restore(*best, model.parameters());
  if (!best) summary.best_epoch = summary.epochs_run;
  return summary;
}

PreparedData prepare_data(const CorpusSplit& split, std::size_t min_token_count) {
  PreparedData d;
  d.vocab = build_vocabulary(split.train, min_token_count);
  std::vector<Trace> all = split.train;
  all.insert(all.end(), split.validation.begin(), split.validation.end());
  all.insert(all.end(), split.test.begin(), split.test.end());
  d.families = family_labels(all);
  d.train = split.train;
  d.validation = split.validation;
  d.test = split.test;
  return d;
}

RegimeResult run_regime(Regime regime, const PreparedData& data, const TrainConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Model model(config.model, data.vocab, data.families);
  Rng init = Rng::substream(config.seed, 0);
  model.initialize(init);
  const auto train = model.make_examples(data.train, config.max_len);
  const auto validation = model.make_examples(data.validation, config.max_len);
  TrainingLog log;
  switch (regime) {
    case Regime::seq2seq_cls:
      train_multitask(model, train, validation, config, {1.0, 0.0}, false, log);
      break;
    case Regime::seq2seq_fap:
      train_multitask(model, train, validation, config, {0.0, 1.0}, false, log);
      break;
    case Regime::ae:
    case Regime::ae_full: {
      std::vector<Example> inputs = train;
      if (regime == Regime::ae_full) {
        // Inputs only; the labels of these rows never enter a gradient.
        inputs.insert(inputs.end(), validation.begin(), validation.end());
        const auto test = model.make_examples(data.test, config.max_len);
        inputs.insert(inputs.end(), test.begin(), test.end());
      }
      pretrain_autoencoder(model, inputs, validation, config, log);
      train_multitask(model, train, validation, config, {1.0, config.lambda_fap}, config.freeze_encoder, log);
      break;
    }
    case Regime::multitask:
      train_multitask(model, train, validation, config, {1.0, config.lambda_fap}, false, log);
      break;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(model), std::move(log), seconds};
}

}  // namespace faplearn
