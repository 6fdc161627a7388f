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


#include "acceptance/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "faplearn/checkpoint.hpp"
#include "faplearn/config.hpp"
#include "faplearn/corpus.hpp"
#include "faplearn/evaluate.hpp"
#include "faplearn/fap.hpp"
#include "faplearn/gradcheck.hpp"
#include "faplearn/ops.hpp"
#include "faplearn/synth.hpp"
#include "faplearn/training.hpp"
#include "test_support.hpp"

#ifndef FAPLEARN_SOURCE_DIR
#define FAPLEARN_SOURCE_DIR "."
#endif

namespace faplearn::acceptance {
namespace {

namespace nm = faplearn::numeric;
using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<const Example*> pointers(const std::vector<Example>& examples) {
  std::vector<const Example*> out;
  for (const auto& e : examples) out.push_back(&e);
  return out;
}

// Membership scan over a hand-written copy of the alias table.
FapVector oracle_fap(const Trace& trace) {
  static const std::vector<std::vector<std::string>> kSpellings = {
      {"CreateFileA", "CreateFileW"},
      {"ReadFile"},
      {"GetTempFileNameA", "GetTempFileNameW"},
      {"SetFileAttributesA", "SetFileAttributesW"},
      {"WriteFile"},
      {"CopyFileA", "CopyFileExW"},
      {"DeleteFileA", "DeleteFileW"},
  };
  FapVector v{};
  for (std::size_t j = 0; j < kSpellings.size(); ++j) {
    for (const auto& call : trace.calls) {
      if (std::find(kSpellings[j].begin(), kSpellings[j].end(), call) != kSpellings[j].end()) {
        v[j] = true;
        break;
      }
    }
  }
  return v;
}

}  // namespace

std::vector<Check> criterion_1(const Options&) {
  std::vector<Check> out;
  Rng rng(2026);
  // Canonical names and near-miss spellings are in the alphabet but must not count.
  std::vector<std::string> alphabet = {"NtClose", "Sleep", "CreateFile", "CopyFileW", "ReadFileEx",
                                       "createfilea", "WriteFileGather", "DeleteFile", "GetTickCount"};
  for (const auto& a : FapSet::standard().all_originals()) alphabet.push_back(a);
  std::vector<Trace> traces(10000);
  for (auto& t : traces) {
    const auto len = rng.between(0, 60);
    for (std::int64_t j = 0; j < len; ++j) t.calls.push_back(alphabet[rng.below(alphabet.size())]);
  }
  const auto start = Clock::now();
  std::vector<FapVector> got;
  got.reserve(traces.size());
  for (const auto& t : traces) got.push_back(extract_fap_vector(t));
  const double elapsed = seconds_since(start);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) agree += got[i] == oracle_fap(traces[i]) ? 1 : 0;
  out.push_back({"oracle agreement on 10000 traces", agree == traces.size(),
                 fmt("%.0f / %.0f", static_cast<double>(agree), static_cast<double>(traces.size()))});
  out.push_back({"extraction runtime < 1 s", elapsed < 1.0, fmt("%.4f s", elapsed)});

  std::set<std::string> texts;
  std::size_t round_trips = 0;
  for (unsigned bits = 0; bits < 128; ++bits) {
    FapVector v{};
    for (std::size_t j = 0; j < kFapLength; ++j) v[j] = (bits >> j) & 1U;
    const Fap f = vector_to_fap(v);
    texts.insert(f.text);
    round_trips += parse_fap(f.text) == v && tokens_to_vector(f.tokens) == v ? 1 : 0;
  }
  out.push_back({"vector_to_fap bijection over 128 vectors", texts.size() == 128 && round_trips == 128,
                 fmt("%.0f distinct, %.0f round trips", static_cast<double>(texts.size()),
                     static_cast<double>(round_trips))});
  return out;
}

std::vector<Check> criterion_2(const Options&) {
  std::vector<Check> out;
  for (bool bidirectional : {false, true}) {
    Rng rng(31);
    auto traces = testing::random_traces(3, 5, 5, 3, rng);
    Model model = testing::small_model(traces, 6, 8, bidirectional, 17);
    const auto examples = model.make_examples(traces);
    const auto batch = pointers(examples);
    auto params = model.parameters();
    nm::GradCheckOptions options;
    options.epsilon = 1e-5;
    options.tolerance = 1e-4;
    options.samples_per_tensor = 32;
    options.magnitude_floor = 1e-5;
    const auto report = nm::grad_check(
        [&](bool g) {
          Tape tape(g);
          const BatchLoss mt = multitask_loss(tape, model, batch, {});
          const Var loss = nm::add(tape, mt.total, reconstruction_loss(tape, model, batch));
          if (g) tape.backward(loss);
          return tape.value(loss)[0];
        },
        params, options);
    for (const auto& p : report.parameters) {
      if (!p.passed) std::printf("  .. %s: rel %.3e analytic %.6e numeric %.6e\n", p.name.c_str(), p.max_relative_error, p.analytic, p.numeric);
    }
    std::size_t full_coverage = 0;
    for (std::size_t i = 0; i < report.parameters.size(); ++i) {
      const auto& p = report.parameters[i];
      const std::size_t size = params[i]->value.size();
      full_coverage += p.coordinates >= std::min<std::size_t>(32, size) ? 1 : 0;
    }
    const std::string tag = bidirectional ? "bidirectional" : "unidirectional";
    out.push_back({tag + " model: every tensor max rel err < 1e-4", report.passed,
                   fmt("max %.3e over %.0f tensors", report.max_relative_error,
                       static_cast<double>(report.parameters.size()))});
    out.push_back({tag + " model: >= 32 coordinates per tensor (all of smaller ones)",
                   full_coverage == params.size(),
                   fmt("%.0f of %.0f tensors covered", static_cast<double>(full_coverage),
                       static_cast<double>(params.size()))});
  }
  return out;
}

std::vector<Check> criterion_3(const Options&) {
  std::vector<Check> out;
  Rng rng(7);
  double worst = 0.0;
  std::size_t finite = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.below(50);
    const double magnitude = i % 2 == 0 ? 1000.0 : 10.0;
    Tensor logits(n);
    for (std::size_t j = 0; j < n; ++j) logits[j] = (2.0 * rng.uniform() - 1.0) * magnitude;
    if (i % 5 == 0) logits[rng.below(n)] = magnitude;
    const Tensor p = nm::softmax(logits);
    worst = std::max(worst, std::abs(p.sum() - 1.0));
    finite += p.all_finite() ? 1 : 0;
  }
  out.push_back({"softmax sums to 1 within 1e-12 on 1000 vectors", worst <= 1e-12 && finite == 1000,
                 fmt("max |sum - 1| = %.3e", worst)});

  double ce_same = 0.0;
  for (std::size_t n : {2, 5, 40}) {
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> q(n, 0.0);
      q[k] = 1.0;
      ce_same = std::max(ce_same, std::abs(nm::cross_entropy(k, q)));
    }
  }
  out.push_back({"CE(one-hot, same one-hot) = 0", ce_same == 0.0, fmt("max %.3e", ce_same)});

  const std::vector<double> half = {0.5, 0.5};
  const double ce = nm::cross_entropy(0, half);
  const bool ce_ok = std::abs(ce - 0.6931471805599453) <= 1e-9 && std::abs(ce - 0.693147) < 5e-7;
  out.push_back({"-log 0.5 = 0.693147", ce_ok, fmt("%.12f", ce)});
  return out;
}

namespace {

struct MemorizeRun {
  std::vector<double> trajectory;
  double final_loss = 0.0;
  bool reproduces_labels = false;
  bool reproduces_faps = false;
  double seconds = 0.0;
  std::size_t epochs = 0;
};

MemorizeRun memorize(const std::vector<Trace>& traces) {
  MemorizeRun run;
  const auto start = Clock::now();
  CorpusSplit split;
  split.train = traces;
  const PreparedData data = prepare_data(split);
  TrainConfig config;
  config.batch_size = traces.size();
  config.epochs = 500;
  config.learning_rate = 0.01;
  config.patience = 0;
  config.stop_loss = 0.002;
  config.seed = 5;
  config.model.embed_dim = 16;
  config.model.hidden_dim = 32;
  Model model(config.model, data.vocab, data.families);
  Rng init = Rng::substream(config.seed, 0);
  model.initialize(init);
  const auto examples = model.make_examples(traces);
  TrainingLog log;
  train_multitask(model, examples, examples, config, {}, false, log);
  for (const auto& r : log.records) {
    run.trajectory.push_back(r.train_loss);
    run.trajectory.push_back(r.val_loss);
    run.epochs = std::max(run.epochs, r.epoch);
  }
  Tape tape(false);
  const auto batch = pointers(examples);
  run.final_loss = tape.value(multitask_loss(tape, model, batch, {}).total)[0];
  const Tensor ctx = model.contexts(examples);
  const auto labels = model.predict_families(ctx);
  const auto faps = model.predict_faps(ctx);
  run.reproduces_labels = run.reproduces_faps = true;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    run.reproduces_labels = run.reproduces_labels && labels[i] == examples[i].family;
    run.reproduces_faps = run.reproduces_faps && fap_exact_match(faps[i], examples[i].fap);
  }
  run.seconds = seconds_since(start);
  return run;
}

}  // namespace

std::vector<Check> criterion_4(const Options&) {
  SynthSpec spec = default_benchmark_spec();
  const std::size_t counts[] = {3, 3, 2, 2};
  for (std::size_t f = 0; f < spec.families.size(); ++f) spec.families[f].count = counts[f];
  const auto traces = generate_corpus(spec);
  const MemorizeRun a = memorize(traces);
  const MemorizeRun b = memorize(traces);
  std::vector<Check> out;
  out.push_back({"10 traces: total loss < 0.01 within 500 epochs", a.final_loss < 0.01 && a.epochs <= 500,
                 fmt("loss %.3e after %.0f epochs", a.final_loss, static_cast<double>(a.epochs))});
  out.push_back({"greedy decode reproduces every label", a.reproduces_labels, ""});
  out.push_back({"greedy decode reproduces every FAP target", a.reproduces_faps, ""});
  out.push_back({"two seeded runs give bit-identical loss trajectories",
                 a.trajectory == b.trajectory && a.final_loss == b.final_loss,
                 fmt("%.0f vs %.0f logged losses", static_cast<double>(a.trajectory.size()),
                     static_cast<double>(b.trajectory.size()))});
  out.push_back({"runtime < 60 s per run", a.seconds < 60.0 && b.seconds < 60.0,
                 fmt("%.2f s, %.2f s", a.seconds, b.seconds)});
  return out;
}

namespace {

struct RunPlan {
  std::string label;  // also the config section name
  Regime cls_regime;
  Regime fap_regime;
  bool bidirectional;
};

const std::vector<RunPlan>& run_plans() {
  static const std::vector<RunPlan> plans = {
      {"seq2seq", Regime::seq2seq_cls, Regime::seq2seq_fap, false},
      {"ae", Regime::ae, Regime::ae, false},
      {"ae-full", Regime::ae_full, Regime::ae_full, false},
      {"bae", Regime::ae, Regime::ae, true},
      {"bae-full", Regime::ae_full, Regime::ae_full, true},
  };
  return plans;
}

struct RunOutcome {
  std::string label;
  std::string variant;
  EvalReport cls;
  EvalReport fap;
  double seconds = 0.0;
  double intra_cosine = 0.0;
  double inter_cosine = 0.0;
};

// Mean cosine similarity over same-family and cross-family pairs of rows.
std::pair<double, double> cosine_split(const Tensor& ctx, const std::vector<Example>& examples) {
  std::vector<double> norms(ctx.rows());
  for (std::size_t i = 0; i < ctx.rows(); ++i) {
    double s = 0.0;
    for (double v : ctx.row(i)) s += v * v;
    norms[i] = std::sqrt(s);
  }
  double intra = 0.0, inter = 0.0;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < ctx.rows(); ++i) {
    for (std::size_t j = i + 1; j < ctx.rows(); ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < ctx.cols(); ++k) dot += ctx.at(i, k) * ctx.at(j, k);
      const double cos = dot / std::max(norms[i] * norms[j], 1e-300);
      if (examples[i].family == examples[j].family) {
        intra += cos;
        ++n_intra;
      } else {
        inter += cos;
        ++n_inter;
      }
    }
  }
  return {intra / std::max<std::size_t>(n_intra, 1), inter / std::max<std::size_t>(n_inter, 1)};
}

TrainConfig plan_config(const ConfigFile& file, const RunPlan& plan) {
  TrainConfig config = train_config_from(file.global);
  for (const ConfigSection* s : file.sections_named(plan.label)) config = train_config_from(*s, config);
  config.model.bidirectional = plan.bidirectional;
  return config;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

RunOutcome execute(const RunPlan& plan, const TrainConfig& config, const PreparedData& data,
                   const std::string& variant, const std::string& report_dir) {
  RunOutcome outcome;
  outcome.label = plan.label;
  outcome.variant = variant;
  std::vector<Regime> regimes = {plan.cls_regime};
  if (plan.fap_regime != plan.cls_regime) regimes.push_back(plan.fap_regime);
  for (Regime regime : regimes) {
    RegimeResult result = run_regime(regime, data, config);
    outcome.seconds += result.seconds;
    const auto test = result.model.make_examples(data.test, config.max_len);
    const std::string stem = report_dir.empty() ? "" : report_dir + "/" + variant + "_" + plan.label + "_" + regime_name(regime);
    std::vector<EvalReport> reports;
    if (regime == plan.cls_regime) {
      outcome.cls = classification_accuracy(result.model, test, "test");
      reports.push_back(outcome.cls);
      const auto [intra, inter] = cosine_split(result.model.contexts(test), test);
      outcome.intra_cosine = intra;
      outcome.inter_cosine = inter;
      if (!stem.empty()) {
        std::ofstream conf(stem + "_confusion.csv");
        write_confusion_csv(conf, outcome.cls, result.model.families());
        std::ofstream emb(stem + "_embeddings.csv");
        export_embeddings(emb, result.model, data.test, config.max_len);
      }
    }
    if (regime == plan.fap_regime) {
      outcome.fap = fap_accuracy(result.model, test, "test");
      reports.push_back(outcome.fap);
      if (!stem.empty()) {
        std::ofstream pred(stem + "_predicted_fap_distribution.csv");
        write_fap_distribution_csv(pred, predicted_fap_distribution(result.model, data.test, config.max_len));
      }
    }
    if (!stem.empty()) {
      std::ofstream log(stem + "_log.csv");
      result.log.write_csv(log);
      std::ofstream rep(stem + "_report.csv");
      write_report_csv(rep, reports);
    }
    std::printf("  .. %s/%s %s: %.1f s\n", variant.c_str(), plan.label.c_str(), regime_name(regime).c_str(),
                result.seconds);
    std::fflush(stdout);
  }
  return outcome;
}

double family_accuracy(const EvalReport& r, const std::string& family) {
  const auto it = r.per_family_accuracy.find(family);
  return it == r.per_family_accuracy.end() ? 0.0 : it->second;
}

}  // namespace

std::vector<Check> criterion_5(const Options& options) {
  const ConfigFile file = load_config(FAPLEARN_SOURCE_DIR "/configs/acceptance.conf");
  const std::uint64_t split_seed = 1;
  const SynthSpec full_spec = default_benchmark_spec();
  SynthSpec reduced_spec = full_spec;
  std::erase_if(reduced_spec.families, [](const FamilyProfile& f) { return f.name == "packed"; });
  const auto full_corpus = generate_corpus(full_spec);
  const PreparedData full = prepare_data(split_corpus(full_corpus, split_seed));
  const PreparedData reduced = prepare_data(split_corpus(generate_corpus(reduced_spec), split_seed));

  std::vector<Check> out;
  std::vector<RunOutcome> outcomes;
  const std::size_t n = full_corpus.size();
  const bool split_ok = full.train.size() == n * 75 / 100 && full.validation.size() == n * 5 / 100 &&
                        full.test.size() == n * 20 / 100;
  out.push_back({"benchmark split is 75/5/20", split_ok,
                 fmt("%.0f/%.0f/%.0f", static_cast<double>(full.train.size()),
                     static_cast<double>(full.validation.size()), static_cast<double>(full.test.size()))});
  for (const RunPlan& plan : run_plans()) {
    const TrainConfig config = plan_config(file, plan);
    const RunOutcome r = execute(plan, config, full, "benchmark", options.report_dir);
    out.push_back({plan.label + ": test classification accuracy >= 0.95", r.cls.accuracy >= 0.95,
                   fmt("%.4f", r.cls.accuracy)});
    out.push_back({plan.label + ": test FAP exact match >= 0.98", r.fap.accuracy >= 0.98,
                   fmt("%.4f", r.fap.accuracy)});
    out.push_back({plan.label + ": runtime <= 15 min", r.seconds <= 900.0, fmt("%.1f s", r.seconds)});
    out.push_back({plan.label + ": intra-family cosine > inter-family cosine", r.intra_cosine > r.inter_cosine,
                   fmt("%.4f vs %.4f", r.intra_cosine, r.inter_cosine)});
    outcomes.push_back(r);
  }

  // Look-alike families against distinct ones.
  for (const RunOutcome& r : outcomes) {
    const double lookalike = 0.5 * (family_accuracy(r.cls, "trojan-fakeav") + family_accuracy(r.cls, "packed"));
    const double distinct = 0.5 * (family_accuracy(r.cls, "adware") + family_accuracy(r.cls, "worm"));
    out.push_back({r.label + ": look-alike families classify worse than distinct ones", lookalike < distinct,
                   fmt("%.4f vs %.4f", lookalike, distinct)});
  }
  for (const auto* name : {"seq2seq", "ae"}) {
    const auto plan = std::find_if(run_plans().begin(), run_plans().end(),
                                   [&](const RunPlan& p) { return p.label == name; });
    const auto base = std::find_if(outcomes.begin(), outcomes.end(),
                                   [&](const RunOutcome& o) { return o.label == name; });
    const RunOutcome r = execute(*plan, plan_config(file, *plan), reduced, "no-packed", options.report_dir);
    out.push_back({std::string(name) + ": dropping packed raises classification accuracy",
                   r.cls.accuracy > base->cls.accuracy, fmt("%.4f vs %.4f", r.cls.accuracy, base->cls.accuracy)});
    out.push_back({std::string(name) + ": FAP exact match stable across variants (|diff| <= 0.02)",
                   std::abs(r.fap.accuracy - base->fap.accuracy) <= 0.02,
                   fmt("%.4f vs %.4f", r.fap.accuracy, base->fap.accuracy)});
    outcomes.push_back(r);
  }

  if (!options.report_dir.empty()) {
    std::ostringstream summary;
    summary << "variant,regime,cls_accuracy,fap_exact_match,fap_token_accuracy,seconds,intra_cosine,inter_cosine\n";
    for (const auto& r : outcomes) {
      summary << r.variant << ',' << r.label << ',' << r.cls.accuracy << ',' << r.fap.accuracy << ','
              << r.fap.token_accuracy << ',' << r.seconds << ',' << r.intra_cosine << ',' << r.inter_cosine << '\n';
    }
    write_text(options.report_dir + "/summary.csv", summary.str());
    std::ofstream sig(options.report_dir + "/fap_significance.csv");
    write_fap_significance_csv(sig, full_corpus);
    std::ofstream dist(options.report_dir + "/fap_distribution.csv");
    write_fap_distribution_csv(dist, fap_distribution(full.test));
  }
  return out;
}

std::vector<Check> criterion_6(const Options& options) {
  const auto corpus = generate_corpus(default_benchmark_spec());
  const auto p6 = fap_significance(corpus, "p6");
  const auto p5 = fap_significance(corpus, "p5");
  std::vector<Check> out;
  for (const auto& [family, ratio] : p6) {
    const bool is_worm = family == "worm";
    out.push_back({"p6 in " + family + (is_worm ? " >= 0.5" : " <= 0.05"),
                   is_worm ? ratio >= 0.5 : ratio <= 0.05, fmt("%.4f", ratio)});
  }
  const double adware = p5.count("adware") ? p5.at("adware") : -1.0;
  out.push_back({"p5 in adware = 0.70 +/- 0.05", std::abs(adware - 0.70) <= 0.05, fmt("%.4f", adware)});
  if (!options.report_dir.empty()) {
    std::ofstream sig(options.report_dir + "/fap_significance.csv");
    write_fap_significance_csv(sig, corpus);
    std::ofstream dist(options.report_dir + "/fap_distribution.csv");
    write_fap_distribution_csv(dist, fap_distribution(corpus));
  }
  return out;
}

namespace {

std::string serialize(const CorpusSplit& split) {
  std::ostringstream out;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    write_corpus(out, *part);
    out << "--\n";
  }
  return out.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// FNV-1a of the benchmark corpus split with seed 1.
constexpr std::uint64_t kGoldenSplitHash = 0xa61a9bcb353324ddULL;

}  // namespace

std::vector<Check> criterion_7(const Options&) {
  std::vector<Check> out;
  testing::TempDir dir("acceptance-c7");
  SynthSpec spec = default_benchmark_spec();
  for (auto& f : spec.families) f.count = 20;
  const auto corpus = generate_corpus(spec);
  const PreparedData data = prepare_data(split_corpus(corpus, 3));
  for (bool bidirectional : {false, true}) {
    TrainConfig config;
    config.epochs = 2;
    config.pretrain_epochs = 1;
    config.patience = 0;
    config.model.embed_dim = 8;
    config.model.hidden_dim = 16;
    config.model.bidirectional = bidirectional;
    RegimeResult result = run_regime(Regime::ae, data, config);
    const auto validation = result.model.make_examples(data.validation);
    const auto val_loss = [&](Model& m) {
      Tape tape(false);
      const auto batch = pointers(validation);
      return tape.value(multitask_loss(tape, m, batch, {}).total)[0];
    };
    const double before = val_loss(result.model);
    const std::string path = dir.file(bidirectional ? "bi.ckpt" : "uni.ckpt");
    result.model.save(path);
    Model loaded = Model::load(path);
    const double after = val_loss(loaded);
    const std::string tag = bidirectional ? "bidirectional" : "unidirectional";
    out.push_back({tag + " checkpoint round trip reproduces val loss to 1e-12",
                   std::abs(before - after) <= 1e-12, fmt("%.17g vs %.17g", before, after)});
  }

  const auto benchmark = generate_corpus(default_benchmark_spec());
  const std::string first = serialize(split_corpus(benchmark, 1));
  const std::string second = serialize(split_corpus(benchmark, 1));
  const std::string other = serialize(split_corpus(benchmark, 2));
  out.push_back({"split_corpus is byte-stable for a fixed seed", first == second && first != other,
                 fmt("%.0f bytes", static_cast<double>(first.size()))});
  const std::uint64_t hash = fnv1a(first);
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  out.push_back({"split bytes match the recorded digest", hash == kGoldenSplitHash, hex});
  return out;
}

}  // namespace faplearn::acceptance
