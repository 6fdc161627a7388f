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

#ifndef FAPLEARN_TRAINING_HPP
#define FAPLEARN_TRAINING_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "faplearn/config.hpp"
#include "faplearn/model.hpp"
#include "faplearn/optimizer.hpp"

namespace faplearn {

enum class OptimizerKind { adam, sgd };

// Validation metric for early stopping. `cls` falls back to FAP accuracy
// when the classification task is off; `mean` averages the active tasks.
enum class EarlyStopMetric { cls, mean };

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t pretrain_epochs = 10;
  std::size_t epochs = 30;
  double learning_rate = 1e-3;
  AdamOptions adam;
  OptimizerKind optimizer = OptimizerKind::adam;
  double clip_norm = 5.0;  // <= 0 disables
  double lambda_fap = 1.0;
  std::uint64_t seed = 1;
  bool freeze_encoder = true;
  std::size_t max_len = kDefaultMaxLen;
  std::size_t patience = 5;  // 0 disables early stopping
  EarlyStopMetric early_stop = EarlyStopMetric::cls;
  // Stop a phase once the epoch's mean train loss drops below this value.
  double stop_loss = 0.0;
  ModelConfig model;

  // Throws DataError on batch < 1, lr <= 0 or lambda_fap < 0.
  void validate() const;
};

// Keys match the field names; adam betas are beta1, beta2, adam_eps and the
// model sizes embed_dim, hidden_dim, bidirectional.
TrainConfig train_config_from(const ConfigSection& section, TrainConfig base = {});
TrainConfig load_train_config(const std::string& path);

enum class Regime { seq2seq_cls, seq2seq_fap, ae, ae_full, multitask };

Regime parse_regime(const std::string& name);
std::string regime_name(Regime regime);

struct EpochRecord {
  std::string phase;
  std::size_t epoch = 0;
  std::string task;
  double train_loss = 0.0;
  double val_loss = 0.0;
  std::optional<double> val_acc;
};

struct TrainingLog {
  std::vector<EpochRecord> records;

  // phase,epoch,task,train_loss,val_loss,val_acc
  void write_csv(std::ostream& out) const;
};

struct TaskWeights {
  double cls = 1.0;
  double fap = 1.0;
};

// Losses of one batch. `contexts` supplies precomputed encoder outputs for
// the batch rows; when null the encoder runs on the tape.
struct BatchLoss {
  Var total;
  Var cls;
  Var fap;
};

BatchLoss multitask_loss(Tape& tape, Model& model, std::span<const Example* const> batch,
                         const TaskWeights& weights, const Tensor* contexts = nullptr);
Var reconstruction_loss(Tape& tape, Model& model, std::span<const Example* const> batch);

struct PhaseSummary {
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double best_metric = 0.0;
  double final_train_loss = 0.0;
};

// Trains the encoder and the reconstruction decoder on input -> input + EOS.
PhaseSummary pretrain_autoencoder(Model& model, const std::vector<Example>& train,
                                  const std::vector<Example>& validation, const TrainConfig& config,
                                  TrainingLog& log);

// Trains the classification and FAP decoders (and the encoder unless frozen)
// on cls_loss + lambda * fap_loss. Early stopping tracks validation
// classification accuracy, or FAP exact match when the classification weight
// is zero; ties go to the lower validation loss. The best epoch's parameters
// are restored before returning.
PhaseSummary train_multitask(Model& model, const std::vector<Example>& train,
                             const std::vector<Example>& validation, const TrainConfig& config,
                             const TaskWeights& weights, bool freeze_encoder, TrainingLog& log);

struct PreparedData {
  Vocabulary vocab;
  std::vector<std::string> families;
  std::vector<Trace> train;
  std::vector<Trace> validation;
  std::vector<Trace> test;
};

// Vocabulary from the train split, families from all three splits.
PreparedData prepare_data(const CorpusSplit& split, std::size_t min_token_count = 1);

struct RegimeResult {
  Model model;
  TrainingLog log;
  double seconds = 0.0;
};

RegimeResult run_regime(Regime regime, const PreparedData& data, const TrainConfig& config);

}  // namespace faplearn

#endif  // FAPLEARN_TRAINING_HPP
