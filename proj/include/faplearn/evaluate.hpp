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

#ifndef FAPLEARN_EVALUATE_HPP
#define FAPLEARN_EVALUATE_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "faplearn/fap.hpp"
#include "faplearn/model.hpp"

namespace faplearn {

struct EvalReport {
  std::string task;   // "cls" or "fap"
  std::string split;  // "train", "val", "test", ...
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
  // Keyed by true family.
  std::map<std::string, double> per_family_accuracy;
  std::map<std::string, std::size_t> family_totals;
  // confusion[true][predicted], classification only.
  std::vector<std::vector<std::size_t>> confusion;
  // Fraction of target positions (EOS included) predicted correctly, FAP only.
  double token_accuracy = 0.0;
};

EvalReport classification_accuracy(const Model& model, const std::vector<Example>& examples,
                                   const std::string& split);
EvalReport fap_accuracy(const Model& model, const std::vector<Example>& examples, const std::string& split);

// task,split,family,correct,total,accuracy  (family "*" is the overall row)
void write_report_csv(std::ostream& out, const std::vector<EvalReport>& reports);
void write_confusion_csv(std::ostream& out, const EvalReport& report, const std::vector<std::string>& families);
void write_report_text(std::ostream& out, const EvalReport& report);

struct FapShare {
  std::string fap_id;
  std::size_t count = 0;
  double ratio = 0.0;
};

// Per family: one entry per FAP id ("other" pools unnamed FAPs), ordered by
// count desc then id asc.
using FapDistribution = std::map<std::string, std::vector<FapShare>>;

FapDistribution fap_distribution(const std::vector<Trace>& traces,
                                 const FapIdTable& table = FapIdTable::standard());
// Same, from model predictions; undecodable outputs count as "other".
FapDistribution predicted_fap_distribution(const Model& model, const std::vector<Trace>& traces,
                                           std::size_t max_len = kDefaultMaxLen,
                                           const FapIdTable& table = FapIdTable::standard());
std::map<std::string, std::vector<std::string>> top_k(const FapDistribution& dist, std::size_t k);

// family,fap_id,count,ratio
void write_fap_distribution_csv(std::ostream& out, const FapDistribution& dist);

// Fraction of each family's traces whose FAP maps to `fap_id`.
std::map<std::string, double> fap_significance(const std::vector<Trace>& traces, const std::string& fap_id,
                                               const FapIdTable& table = FapIdTable::standard());
// fap_id,family,ratio for every table id plus "other".
void write_fap_significance_csv(std::ostream& out, const std::vector<Trace>& traces,
                                const FapIdTable& table = FapIdTable::standard());

// id,family,c0..c{H-1}
void export_embeddings(std::ostream& out, const Model& model, const std::vector<Trace>& traces,
                       std::size_t max_len = kDefaultMaxLen);

}  // namespace faplearn

#endif  // FAPLEARN_EVALUATE_HPP
