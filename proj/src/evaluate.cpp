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

#include "faplearn/evaluate.hpp"

#include <algorithm>
#include <cstdio>

#include "faplearn/error.hpp"

namespace faplearn {

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void finish(EvalReport& r, const std::vector<std::string>& families, const std::vector<std::size_t>& ok,
            const std::vector<std::size_t>& totals) {
  r.accuracy = r.total ? static_cast<double>(r.correct) / static_cast<double>(r.total) : 0.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (totals[f] == 0) continue;
    r.family_totals[families[f]] = totals[f];
    r.per_family_accuracy[families[f]] = static_cast<double>(ok[f]) / static_cast<double>(totals[f]);
  }
}

FapDistribution to_distribution(const std::map<std::string, std::map<std::string, std::size_t>>& counts) {
  FapDistribution dist;
  for (const auto& [family, by_id] : counts) {
    std::size_t total = 0;
    for (const auto& [id, c] : by_id) total += c;
    auto& shares = dist[family];
    for (const auto& [id, c] : by_id) {
      shares.push_back({id, c, static_cast<double>(c) / static_cast<double>(total)});
    }
    std::stable_sort(shares.begin(), shares.end(),
                     [](const FapShare& a, const FapShare& b) { return a.count > b.count; });
  }
  return dist;
}

}  // namespace

EvalReport classification_accuracy(const Model& model, const std::vector<Example>& examples,
                                   const std::string& split) {
  EvalReport r;
  r.task = "cls";
  r.split = split;
  const std::size_t k = model.families().size();
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::vector<std::size_t> ok(k, 0), totals(k, 0);
  if (!examples.empty()) {
    const auto pred = model.predict_families(model.contexts(examples));
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const std::uint32_t truth = examples[i].family;
      ++r.confusion[truth][pred[i]];
      ++totals[truth];
      if (pred[i] == truth) {
        ++ok[truth];
        ++r.correct;
      }
    }
  }
  r.total = examples.size();
  finish(r, model.families(), ok, totals);
  return r;
}

EvalReport fap_accuracy(const Model& model, const std::vector<Example>& examples, const std::string& split) {
  EvalReport r;
  r.task = "fap";
  r.split = split;
  const std::size_t k = model.families().size();
  std::vector<std::size_t> ok(k, 0), totals(k, 0);
  std::size_t tokens_ok = 0, tokens_total = 0;
  if (!examples.empty()) {
    const auto pred = model.predict_faps(model.contexts(examples));
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const Example& e = examples[i];
      ++totals[e.family];
      if (fap_exact_match(pred[i], e.fap)) {
        ++ok[e.family];
        ++r.correct;
      }
      IndexSequence full = pred[i];
      full.push_back(Vocabulary::kEos);
      for (std::size_t t = 0; t < e.fap.size(); ++t) tokens_ok += t < full.size() && full[t] == e.fap[t];
      tokens_total += e.fap.size();
    }
  }
  r.total = examples.size();
  r.token_accuracy = tokens_total ? static_cast<double>(tokens_ok) / static_cast<double>(tokens_total) : 0.0;
  finish(r, model.families(), ok, totals);
  return r;
}

void write_report_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "task,split,family,correct,total,accuracy\n";
  for (const auto& r : reports) {
    out << r.task << ',' << r.split << ",*," << r.correct << ',' << r.total << ',' << fixed(r.accuracy) << '\n';
    for (const auto& [family, acc] : r.per_family_accuracy) {
      const std::size_t total = r.family_totals.at(family);
      const auto correct = static_cast<std::size_t>(acc * static_cast<double>(total) + 0.5);
      out << r.task << ',' << r.split << ',' << family << ',' << correct << ',' << total << ',' << fixed(acc)
          << '\n';
    }
  }
}

void write_confusion_csv(std::ostream& out, const EvalReport& report, const std::vector<std::string>& families) {
  out << "true\\predicted";
  for (const auto& f : families) out << ',' << f;
  out << '\n';
  for (std::size_t i = 0; i < report.confusion.size(); ++i) {
    out << families.at(i);
    for (std::size_t c : report.confusion[i]) out << ',' << c;
    out << '\n';
  }
}

void write_report_text(std::ostream& out, const EvalReport& r) {
  out << r.task << " accuracy on " << r.split << ": " << fixed(r.accuracy) << " (" << r.correct << '/' << r.total
      << ")\n";
  if (r.task == "fap") out << "  token accuracy: " << fixed(r.token_accuracy) << '\n';
  for (const auto& [family, acc] : r.per_family_accuracy) {
    out << "  " << family << ": " << fixed(acc) << " of " << r.family_totals.at(family) << '\n';
  }
}

FapDistribution fap_distribution(const std::vector<Trace>& traces, const FapIdTable& table) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const Trace& t : traces) ++counts[t.family][fap_to_id(vector_to_fap(extract_fap_vector(t)), table)];
  return to_distribution(counts);
}

FapDistribution predicted_fap_distribution(const Model& model, const std::vector<Trace>& traces,
                                           std::size_t max_len, const FapIdTable& table) {
  std::vector<IndexSequence> inputs;
  std::vector<const IndexSequence*> ptrs;
  inputs.reserve(traces.size());
  for (const Trace& t : traces) inputs.push_back(encode_trace(model.api_vocab(), t, max_len));
  for (const auto& s : inputs) ptrs.push_back(&s);
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  if (traces.empty()) return {};
  const auto pred = model.predict_faps(model.contexts(ptrs));
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto v = decode_fap_sequence(pred[i], model.fap_vocab());
    const std::string id = v ? fap_to_id(vector_to_fap(*v), table) : std::string(kOtherFapId);
    ++counts[traces[i].family][id];
  }
  return to_distribution(counts);
}

std::map<std::string, std::vector<std::string>> top_k(const FapDistribution& dist, std::size_t k) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [family, shares] : dist) {
    auto& ids = out[family];
    for (std::size_t i = 0; i < std::min(k, shares.size()); ++i) ids.push_back(shares[i].fap_id);
  }
  return out;
}

void write_fap_distribution_csv(std::ostream& out, const FapDistribution& dist) {
  out << "family,fap_id,count,ratio\n";
  for (const auto& [family, shares] : dist) {
    for (const auto& s : shares) out << family << ',' << s.fap_id << ',' << s.count << ',' << fixed(s.ratio) << '\n';
  }
}

std::map<std::string, double> fap_significance(const std::vector<Trace>& traces, const std::string& fap_id,
                                               const FapIdTable& table) {
  if (fap_id != kOtherFapId && !table.has_id(fap_id)) throw UnknownFapId(fap_id);
  std::map<std::string, std::pair<std::size_t, std::size_t>> hits;  // family -> (match, total)
  for (const Trace& t : traces) {
    auto& h = hits[t.family];
    ++h.second;
    h.first += fap_to_id(vector_to_fap(extract_fap_vector(t)), table) == fap_id;
  }
  std::map<std::string, double> out;
  for (const auto& [family, h] : hits) out[family] = static_cast<double>(h.first) / static_cast<double>(h.second);
  return out;
}

void write_fap_significance_csv(std::ostream& out, const std::vector<Trace>& traces, const FapIdTable& table) {
  out << "fap_id,family,ratio\n";
  std::vector<std::string> ids;
  for (const auto& [text, id] : table.entries()) ids.push_back(id);
  ids.emplace_back(kOtherFapId);
  for (const auto& id : ids) {
    for (const auto& [family, ratio] : fap_significance(traces, id, table)) {
      out << id << ',' << family << ',' << fixed(ratio) << '\n';
    }
  }
}

void export_embeddings(std::ostream& out, const Model& model, const std::vector<Trace>& traces,
                       std::size_t max_len) {
  const std::size_t h = model.config().hidden_dim;
  out << "id,family";
  for (std::size_t j = 0; j < h; ++j) out << ",c" << j;
  out << '\n';
  if (traces.empty()) return;
  std::vector<IndexSequence> inputs;
  std::vector<const IndexSequence*> ptrs;
  inputs.reserve(traces.size());
  for (const Trace& t : traces) {
    inputs.push_back(encode_trace(model.api_vocab(), t, max_len));
    if (inputs.back().empty()) throw DataError("trace '" + t.id + "' has no calls");
  }
  for (const auto& s : inputs) ptrs.push_back(&s);
  const Tensor c = model.contexts(ptrs);
  char buf[32];
  for (std::size_t i = 0; i < traces.size(); ++i) {
    out << traces[i].id << ',' << traces[i].family;
    for (double v : c.row(i)) {
      std::snprintf(buf, sizeof buf, "%.9g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace faplearn
