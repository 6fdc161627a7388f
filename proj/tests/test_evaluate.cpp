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
#include <sstream>
#include <vector>

#include "faplearn/error.hpp"
#include "faplearn/evaluate.hpp"
#include "faplearn/synth.hpp"
#include "faplearn/training.hpp"
#include "test_support.hpp"

namespace faplearn {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<Trace> balanced_traces() {
  std::vector<Trace> out;
  const std::vector<std::string> families = {"a", "b", "c", "d"};
  for (std::size_t i = 0; i < 12; ++i) {
    out.push_back({"t" + std::to_string(i), families[i % 4], {"Sleep", i % 2 ? "CreateFileA" : "NtClose"}});
  }
  return out;
}

TEST(Classification, ConstantPredictorScoresAQuarter) {
  const auto traces = balanced_traces();
  Model model(ModelConfig{4, 4, false, 0.0}, build_vocabulary(traces, 1), family_labels(traces));
  model.classifier.output_bias.value[0] = 1.0;
  const auto examples = model.make_examples(traces);
  const EvalReport r = classification_accuracy(model, examples, "test");
  EXPECT_EQ(r.task, "cls");
  EXPECT_EQ(r.total, 12u);
  EXPECT_EQ(r.correct, 3u);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.25);
  EXPECT_DOUBLE_EQ(r.per_family_accuracy.at("a"), 1.0);
  EXPECT_DOUBLE_EQ(r.per_family_accuracy.at("d"), 0.0);
  ASSERT_EQ(r.confusion.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t row = 0;
    for (std::size_t c : r.confusion[i]) row += c;
    EXPECT_EQ(row, r.family_totals.at(model.families()[i]));
    EXPECT_EQ(r.confusion[i][0], 3u);
  }
}

TEST(Classification, PermutationInvariant) {
  Rng rng(1);
  auto traces = testing::random_traces(30, 2, 9, 3, rng);
  const Model model = testing::small_model(traces, 5, 6, false, 3);
  const EvalReport a = classification_accuracy(model, model.make_examples(traces), "x");
  std::reverse(traces.begin(), traces.end());
  const EvalReport b = classification_accuracy(model, model.make_examples(traces), "x");
  EXPECT_EQ(a.correct, b.correct);
  EXPECT_EQ(a.confusion, b.confusion);
  const EvalReport fa = fap_accuracy(model, model.make_examples(traces), "x");
  std::swap(traces[0], traces[7]);
  const EvalReport fb = fap_accuracy(model, model.make_examples(traces), "x");
  EXPECT_EQ(fa.correct, fb.correct);
  EXPECT_DOUBLE_EQ(fa.token_accuracy, fb.token_accuracy);
}

TEST(FapAccuracy, EmptyFapPredictedForEmptyTargetsIsCorrect) {
  std::vector<Trace> traces = {{"a", "x", {"Sleep"}}, {"b", "x", {"NtClose", "Sleep"}}};
  Model model(ModelConfig{4, 4, false, 0.0}, build_vocabulary(traces, 1), family_labels(traces));
  model.fap.output_bias.value[Vocabulary::kEos] = 5.0;
  const EvalReport r = fap_accuracy(model, model.make_examples(traces), "val");
  EXPECT_EQ(r.correct, 2u);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.token_accuracy, 1.0);

  std::vector<Trace> one_file = {{"c", "x", {"CreateFileW"}}};
  const EvalReport wrong = fap_accuracy(model, model.make_examples(one_file), "val");
  EXPECT_EQ(wrong.correct, 0u);
  EXPECT_DOUBLE_EQ(wrong.token_accuracy, 0.0);
}

class Memorizer : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    traces_ = new std::vector<Trace>{
        {"m0", "worm", {"Sleep", "CreateFileA", "WriteFile", "CopyFileA", "NtClose"}},
        {"m1", "adware", {"NtClose", "CreateFileW", "ReadFile", "Sleep"}},
        {"m2", "worm", {"CreateFileA", "Sleep", "WriteFile", "CopyFileExW"}},
        {"m3", "trojan", {"Sleep", "NtClose", "Sleep"}},
        {"m4", "adware", {"ReadFile", "CreateFileA", "Sleep", "Sleep", "NtClose"}},
        {"m5", "trojan", {"CreateFileW", "NtClose", "WriteFile"}},
    };
    TrainConfig c;
    c.batch_size = 6;
    c.epochs = 400;
    c.learning_rate = 0.02;
    c.patience = 0;
    c.stop_loss = 1e-3;
    c.model.embed_dim = 8;
    c.model.hidden_dim = 16;
    model_ = new Model(testing::small_model(*traces_, 8, 16, false, 4));
    const auto examples = model_->make_examples(*traces_);
    TrainingLog log;
    train_multitask(*model_, examples, {}, c, {}, false, log);
  }
  static void TearDownTestSuite() {
    delete model_;
    delete traces_;
  }
  static std::vector<Trace>* traces_;
  static Model* model_;
};

std::vector<Trace>* Memorizer::traces_ = nullptr;
Model* Memorizer::model_ = nullptr;

TEST_F(Memorizer, ScoresPerfectlyOnItsTrainingSet) {
  const auto examples = model_->make_examples(*traces_);
  EXPECT_DOUBLE_EQ(classification_accuracy(*model_, examples, "train").accuracy, 1.0);
  const EvalReport f = fap_accuracy(*model_, examples, "train");
  EXPECT_DOUBLE_EQ(f.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(f.token_accuracy, 1.0);
}

TEST_F(Memorizer, PredictedDistributionEqualsGroundTruth) {
  const FapDistribution truth = fap_distribution(*traces_);
  const FapDistribution predicted = predicted_fap_distribution(*model_, *traces_);
  ASSERT_EQ(truth.size(), predicted.size());
  for (const auto& [family, shares] : truth) {
    const auto& other = predicted.at(family);
    ASSERT_EQ(shares.size(), other.size());
    for (std::size_t i = 0; i < shares.size(); ++i) {
      EXPECT_EQ(shares[i].fap_id, other[i].fap_id);
      EXPECT_EQ(shares[i].count, other[i].count);
    }
  }
}

TEST_F(Memorizer, EmbeddingsOneRowPerTrace) {
  std::vector<Trace> traces = *traces_;
  traces.push_back({"dup", "worm", traces[0].calls});
  std::ostringstream out;
  export_embeddings(out, *model_, traces);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), traces.size() + 1);
  const auto header = split_csv(lines[0]);
  ASSERT_EQ(header.size(), 2u + 16u);
  EXPECT_EQ(header[0], "id");
  EXPECT_EQ(header[1], "family");
  EXPECT_EQ(header[2], "c0");
  EXPECT_EQ(header.back(), "c15");
  auto first = split_csv(lines[1]);
  auto dup = split_csv(lines.back());
  EXPECT_EQ(dup[0], "dup");
  first.erase(first.begin());
  dup.erase(dup.begin());
  EXPECT_EQ(first, dup);
}

TEST(Reports, CsvAndText) {
  EvalReport r;
  r.task = "cls";
  r.split = "test";
  r.correct = 3;
  r.total = 4;
  r.accuracy = 0.75;
  r.per_family_accuracy = {{"a", 1.0}, {"b", 0.5}};
  r.family_totals = {{"a", 2}, {"b", 2}};
  r.confusion = {{2, 0}, {1, 1}};
  std::ostringstream csv;
  write_report_csv(csv, {r});
  const auto lines = lines_of(csv.str());
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "task,split,family,correct,total,accuracy");
  EXPECT_EQ(split_csv(lines[1])[2], "*");
  EXPECT_EQ(split_csv(lines[3])[3], "1");
  std::ostringstream confusion;
  write_confusion_csv(confusion, r, {"a", "b"});
  EXPECT_EQ(lines_of(confusion.str())[2], "b,1,1");
  std::ostringstream text;
  write_report_text(text, r);
  EXPECT_NE(text.str().find("0.75"), std::string::npos);
}

TEST(FapDistribution, SingleSharedFap) {
  std::vector<Trace> traces;
  for (int i = 0; i < 5; ++i) traces.push_back({"t" + std::to_string(i), "w", {"CreateFileA", "WriteFile"}});
  const FapDistribution d = fap_distribution(traces);
  ASSERT_EQ(d.at("w").size(), 1u);
  EXPECT_EQ(d.at("w")[0].fap_id, "p1");
  EXPECT_EQ(d.at("w")[0].count, 5u);
  EXPECT_DOUBLE_EQ(d.at("w")[0].ratio, 1.0);
}

TEST(FapDistribution, RatiosSumToOneAndOrdering) {
  Rng rng(2);
  const auto traces = testing::random_traces(300, 1, 6, 4, rng);
  const FapDistribution d = fap_distribution(traces);
  for (const auto& [family, shares] : d) {
    double total = 0.0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
      total += shares[i].ratio;
      if (i > 0) {
        const auto& prev = shares[i - 1];
        EXPECT_TRUE(prev.count > shares[i].count ||
                    (prev.count == shares[i].count && prev.fap_id < shares[i].fap_id));
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
  const auto top = top_k(d, 3);
  for (const auto& [family, ids] : top) {
    EXPECT_LE(ids.size(), 3u);
    EXPECT_EQ(ids.front(), d.at(family).front().fap_id);
  }
  std::ostringstream out;
  write_fap_distribution_csv(out, d);
  EXPECT_EQ(lines_of(out.str())[0], "family,fap_id,count,ratio");
}

TEST(FapDistribution, PlantedCopyFileRate) {
  FamilyProfile p;
  p.name = "planted";
  p.count = 500;
  p.fap_rates = {1.0, 0.5, 0.0, 0.0, 1.0, 0.7, 0.0};
  p.length_mean = 60;
  p.length_spread = 10;
  SynthSpec spec;
  spec.families = {p};
  spec.seed = 77;
  const auto traces = generate_corpus(spec);
  // CopyFile-containing FAPs: CreateFile_WriteFile_CopyFile (p6) and its ReadFile variant ("other").
  std::size_t with_copy = 0;
  for (const Trace& t : traces) with_copy += extract_fap_vector(t)[5];
  const FapDistribution d = fap_distribution(traces);
  double ratio = 0.0;
  for (const auto& s : d.at("planted")) {
    if (s.fap_id == "p6") ratio += s.ratio;
  }
  const double copy_ratio = static_cast<double>(with_copy) / 500.0;
  EXPECT_NEAR(copy_ratio, 0.7, 0.03);
  EXPECT_LE(ratio, copy_ratio);
  EXPECT_NEAR(ratio, 0.7 * 0.5, 0.05);
}

TEST(Significance, Examples) {
  std::vector<Trace> traces;
  for (int i = 0; i < 4; ++i) traces.push_back({"t" + std::to_string(i), "w", {"CreateFileA", "WriteFile"}});
  traces.push_back({"u", "v", {"Sleep"}});
  const auto p1 = fap_significance(traces, "p1");
  EXPECT_DOUBLE_EQ(p1.at("w"), 1.0);
  EXPECT_DOUBLE_EQ(p1.at("v"), 0.0);
  for (const auto& [family, ratio] : fap_significance(traces, "p6")) EXPECT_EQ(ratio, 0.0);
  EXPECT_DOUBLE_EQ(fap_significance(traces, "other").at("v"), 1.0);
  EXPECT_THROW(fap_significance(traces, "p7"), UnknownFapId);
  std::ostringstream out;
  write_fap_significance_csv(out, traces);
  const auto lines = lines_of(out.str());
  EXPECT_EQ(lines[0], "fap_id,family,ratio");
  EXPECT_EQ(lines.size(), 1u + 7u * 2u);
}

}  // namespace
}  // namespace faplearn
