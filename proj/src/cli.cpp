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

#include "faplearn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "faplearn/corpus.hpp"
#include "faplearn/error.hpp"
#include "faplearn/evaluate.hpp"
#include "faplearn/fap.hpp"
#include "faplearn/model.hpp"
#include "faplearn/synth.hpp"
#include "faplearn/training.hpp"

namespace faplearn {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

std::vector<Trace> require_corpus(const std::string& path) {
  if (!fs::exists(path)) throw DataError("corpus '" + path + "' does not exist");
  return load_corpus(path);
}

struct DataDir {
  Vocabulary vocab;
  std::vector<std::string> families;
  CorpusSplit split;
};

std::string in_dir(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

void write_families(const std::string& path, const std::vector<std::string>& families) {
  auto out = open_out(path);
  for (const auto& f : families) out << f << '\n';
}

std::vector<std::string> read_families(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

DataDir load_data_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("data directory '" + dir + "' does not exist");
  DataDir d;
  std::ifstream vin(in_dir(dir, "vocab.tsv"));
  if (!vin) throw DataError("cannot open '" + in_dir(dir, "vocab.tsv") + "'");
  d.vocab = Vocabulary::read(vin);
  d.families = read_families(in_dir(dir, "families.tsv"));
  d.split.train = require_corpus(in_dir(dir, "train.tsv"));
  d.split.validation = require_corpus(in_dir(dir, "validation.tsv"));
  d.split.test = require_corpus(in_dir(dir, "test.tsv"));
  return d;
}

const std::vector<Trace>& split_named(const DataDir& d, const std::string& name) {
  if (name == "train") return d.split.train;
  if (name == "val") return d.split.validation;
  return d.split.test;
}

bool storable(const std::string& s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"faplearn: multi-task learning of malware families and file access patterns"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // synth
  std::string synth_spec, synth_out;
  std::optional<std::uint64_t> synth_seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--spec", synth_spec, "Spec file, or 'benchmark' / 'fine-grained'")->required();
  synth->add_option("--seed", synth_seed, "Override the spec seed");
  synth->add_option("--out", synth_out, "Output corpus TSV")->required();

  // prepare
  std::string prep_corpus, prep_dir;
  std::uint64_t prep_seed = 1;
  std::size_t prep_min_family = 1, prep_min_token = 1;
  auto* prepare = app.add_subcommand("prepare", "Split a corpus 75/5/20 and build the vocabulary");
  prepare->add_option("--corpus", prep_corpus, "Corpus TSV")->required();
  prepare->add_option("--seed", prep_seed, "Split seed")->capture_default_str();
  prepare->add_option("--min-family", prep_min_family, "Drop families with fewer traces")->capture_default_str();
  prepare->add_option("--min-token", prep_min_token, "Minimum train count for a vocabulary token")
      ->capture_default_str();
  prepare->add_option("--out-dir", prep_dir, "Directory for train/validation/test/vocab/families")->required();

  // extract-fap
  std::string xf_corpus, xf_out;
  auto* extract = app.add_subcommand("extract-fap", "Per-trace FAP extraction CSV");
  extract->add_option("--corpus", xf_corpus, "Corpus TSV")->required();
  extract->add_option("--out", xf_out, "Output CSV (id,family,vector,fap_text,fap_id)")->required();

  // train
  std::string tr_regime, tr_config, tr_dir, tr_ckpt, tr_log;
  bool tr_bi = false;
  std::optional<std::uint64_t> tr_seed;
  auto* train = app.add_subcommand("train", "Train a model under one regime");
  train->add_option("--regime", tr_regime, "Training regime")
      ->required()
      ->check(CLI::IsMember({"seq2seq-cls", "seq2seq-fap", "ae", "ae-full", "multitask"}));
  train->add_flag("--bidirectional", tr_bi, "Bidirectional encoder");
  train->add_option("--config", tr_config, "Training config (key = value)");
  train->add_option("--data-dir", tr_dir, "Output directory of 'prepare'")->required();
  train->add_option("--out-ckpt", tr_ckpt, "Checkpoint to write")->required();
  train->add_option("--log", tr_log, "Training log CSV");
  train->add_option("--seed", tr_seed, "Override the config seed");

  // eval
  std::string ev_ckpt, ev_dir, ev_split = "test", ev_task = "both", ev_out;
  auto* eval = app.add_subcommand("eval", "Classification and FAP accuracy on a split");
  eval->add_option("--ckpt", ev_ckpt, "Checkpoint")->required();
  eval->add_option("--data-dir", ev_dir, "Data directory (default: the one used for training)");
  eval->add_option("--split", ev_split, "Split")->check(CLI::IsMember({"train", "val", "test"}))->capture_default_str();
  eval->add_option("--task", ev_task, "Task")->check(CLI::IsMember({"cls", "fap", "both"}))->capture_default_str();
  eval->add_option("--out", ev_out, "Report CSV (task,split,family,correct,total,accuracy)")->required();

  // fap-stats
  std::string fs_corpus, fs_out, fs_dist, fs_sig;
  auto* stats = app.add_subcommand("fap-stats", "FAP counts, distributions and significance");
  stats->add_option("--corpus", fs_corpus, "Corpus TSV")->required();
  stats->add_option("--out", fs_out, "Counts CSV (family,fap_text,fap_id,count)")->required();
  stats->add_option("--distribution-out", fs_dist, "Distribution CSV (family,fap_id,count,ratio)");
  stats->add_option("--significance-out", fs_sig, "Significance CSV (fap_id,family,ratio)");

  // export-embeddings
  std::string ee_ckpt, ee_corpus, ee_out;
  auto* embed = app.add_subcommand("export-embeddings", "Context vectors of every trace");
  embed->add_option("--ckpt", ee_ckpt, "Checkpoint")->required();
  embed->add_option("--corpus", ee_corpus, "Corpus TSV")->required();
  embed->add_option("--out", ee_out, "Output CSV (id,family,c0..c{H-1})")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  }

  try {
    if (*synth) {
      SynthSpec spec;
      if (synth_spec == "benchmark") {
        spec = default_benchmark_spec();
      } else if (synth_spec == "fine-grained") {
        spec = fine_grained_spec();
      } else {
        if (!fs::exists(synth_spec)) throw DataError("spec '" + synth_spec + "' does not exist");
        spec = load_synth_spec(synth_spec);
      }
      if (synth_seed) spec.seed = *synth_seed;
      const auto corpus = generate_corpus(spec);
      save_corpus(synth_out, corpus);
      out << "wrote " << corpus.size() << " traces to " << synth_out << '\n';
    } else if (*prepare) {
      const auto corpus = drop_rare_families(require_corpus(prep_corpus), prep_min_family);
      const CorpusSplit split = split_corpus(corpus, prep_seed);
      const PreparedData data = prepare_data(split, prep_min_token);
      fs::create_directories(prep_dir);
      save_corpus(in_dir(prep_dir, "train.tsv"), split.train);
      save_corpus(in_dir(prep_dir, "validation.tsv"), split.validation);
      save_corpus(in_dir(prep_dir, "test.tsv"), split.test);
      auto vout = open_out(in_dir(prep_dir, "vocab.tsv"));
      data.vocab.write(vout);
      write_families(in_dir(prep_dir, "families.tsv"), data.families);
      out << "split " << corpus.size() << " traces into " << split.train.size() << '/' << split.validation.size()
          << '/' << split.test.size() << "; vocabulary " << data.vocab.size() << ", families "
          << data.families.size() << '\n';
    } else if (*extract) {
      const auto corpus = require_corpus(xf_corpus);
      auto f = open_out(xf_out);
      write_fap_extraction_csv(f, corpus);
    } else if (*train) {
      TrainConfig config;
      if (!tr_config.empty()) {
        if (!fs::exists(tr_config)) throw DataError("config '" + tr_config + "' does not exist");
        config = load_train_config(tr_config);
      }
      if (tr_seed) config.seed = *tr_seed;
      if (tr_bi) config.model.bidirectional = true;
      const DataDir d = load_data_dir(tr_dir);
      PreparedData data{d.vocab, d.families, d.split.train, d.split.validation, d.split.test};
      RegimeResult result = run_regime(parse_regime(tr_regime), data, config);
      const std::string abs_dir = fs::absolute(tr_dir).lexically_normal().string();
      result.model.metadata.push_back({"regime", {tr_regime}});
      if (storable(abs_dir)) result.model.metadata.push_back({"data_dir", {abs_dir}});
      result.model.save(tr_ckpt);
      if (!tr_log.empty()) {
        auto f = open_out(tr_log);
        result.log.write_csv(f);
      }
      const auto val = result.model.make_examples(data.validation, config.max_len);
      const EvalReport cls = classification_accuracy(result.model, val, "val");
      const EvalReport fap = fap_accuracy(result.model, val, "val");
      out << "trained " << tr_regime << (config.model.bidirectional ? " (bidirectional)" : "") << " in "
          << result.seconds << " s\n";
      write_report_text(out, cls);
      write_report_text(out, fap);
    } else if (*eval) {
      if (!fs::exists(ev_ckpt)) throw DataError("checkpoint '" + ev_ckpt + "' does not exist");
      const Model model = Model::load(ev_ckpt);
      if (ev_dir.empty()) {
        for (const auto& [key, values] : model.metadata) {
          if (key == "data_dir" && !values.empty()) ev_dir = values.front();
        }
        if (ev_dir.empty()) throw DataError("checkpoint records no data directory; pass --data-dir");
      }
      const DataDir d = load_data_dir(ev_dir);
      const auto examples = model.make_examples(split_named(d, ev_split));
      std::vector<EvalReport> reports;
      if (ev_task != "fap") reports.push_back(classification_accuracy(model, examples, ev_split));
      if (ev_task != "cls") reports.push_back(fap_accuracy(model, examples, ev_split));
      auto f = open_out(ev_out);
      write_report_csv(f, reports);
      for (const auto& r : reports) write_report_text(out, r);
    } else if (*stats) {
      const auto corpus = require_corpus(fs_corpus);
      auto f = open_out(fs_out);
      write_fap_counts_csv(f, count_faps(corpus));
      if (!fs_dist.empty()) {
        auto g = open_out(fs_dist);
        write_fap_distribution_csv(g, fap_distribution(corpus));
      }
      if (!fs_sig.empty()) {
        auto g = open_out(fs_sig);
        write_fap_significance_csv(g, corpus);
      }
    } else if (*embed) {
      if (!fs::exists(ee_ckpt)) throw DataError("checkpoint '" + ee_ckpt + "' does not exist");
      const Model model = Model::load(ee_ckpt);
      const auto corpus = require_corpus(ee_corpus);
      auto f = open_out(ee_out);
      export_embeddings(f, model, corpus);
    }
  } catch (const DivergedLoss& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace faplearn
