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

#include "faplearn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "faplearn/error.hpp"
#include "faplearn/rng.hpp"

namespace faplearn {

namespace {

using Chunk = std::vector<std::string>;

std::string pick(Rng& rng, const std::vector<std::string>& from) { return from[rng.below(from.size())]; }

std::string resolve(const std::string& call, Rng& rng, const FapSet& fset) {
  if (auto slot = fset.slot_of_canonical(call)) return pick(rng, fset.originals(*slot));
  return call;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, std::size_t line) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    return {std::stoull(text.substr(0, dash)), std::stoull(text.substr(dash + 1))};
  } catch (const std::exception&) {
    throw MalformedLine(line, "bad range '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

FamilyProfile base_profile(std::string name, std::size_t count, double mean, double spread) {
  FamilyProfile p;
  p.name = std::move(name);
  p.count = count;
  p.length_mean = mean;
  p.length_spread = spread;
  return p;
}

// Slots: CreateFile, ReadFile, GetTempFileName, SetFileAttributes, WriteFile, CopyFile, DeleteFile.
constexpr std::array<double, kFapLength> kTrojanRates = {0.5, 0.45, 0.0, 0.0, 0.5, 0.0, 0.0};
constexpr std::array<double, kFapLength> kAdwareRates = {1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0};
constexpr std::array<double, kFapLength> kWormRates = {0.9, 0.1, 0.0, 0.0, 1.0, 0.8, 0.0};

const Motif kTrojanMotif{{"RegSetValueExA", "CreateWindowExA", "MessageBoxA"}, 0.97, 1, 3};
const Motif kPackedMotif{{"VirtualAlloc", "VirtualProtect", "RtlDecompressBuffer"}, 0.9, 1, 3};
const Motif kAdwareMotif{{"InternetOpenA", "InternetOpenUrlA", "InternetReadFile", "ShellExecuteA"}, 1.0, 1, 3};
const Motif kTempTriplet{{"GetTempFileName", "SetFileAttributes", "DeleteFile"}, 0.7, 1, 1};
const Motif kWormMotif{{"WSAStartup", "socket", "connect", "send"}, 1.0, 1, 3};
const Motif kDownloaderMotif{{"URLDownloadToFileA", "WinExec"}, 1.0, 1, 3};

}  // namespace

const std::vector<std::string>& default_background() {
  static const std::vector<std::string> names = {
      "LdrLoadDll",          "LdrGetProcedureAddress",   "LdrGetDllHandle",      "NtAllocateVirtualMemory",
      "NtFreeVirtualMemory", "NtClose",                  "NtOpenKey",            "NtQueryValueKey",
      "RegOpenKeyExA",       "RegQueryValueExA",         "RegCloseKey",          "GetSystemTimeAsFileTime",
      "GetTickCount",        "Sleep",                    "GetModuleHandleA",     "GetProcAddress",
      "LoadLibraryA",        "FindResourceA",            "LoadResource",         "SizeofResource",
      "GetSystemMetrics",    "GetCursorPos",             "GetForegroundWindow",  "NtDelayExecution",
      "NtQuerySystemInformation", "GetSystemDirectoryA", "GetComputerNameA",     "GetUserNameA",
      "NtOpenProcess",       "NtQueryInformationProcess", "CreateMutexA",        "OpenMutexA",
      "FindWindowA",         "EnumWindows",              "GetKeyState",          "SetWindowsHookExA",
      "UnhookWindowsHookEx", "NtOpenSection",            "NtMapViewOfSection",   "NtUnmapViewOfSection",
      "DeviceIoControl",     "GetVersionExA",            "GetNativeSystemInfo",  "IsDebuggerPresent",
      "CreateThread",        "NtResumeThread",           "NtTerminateProcess",   "GetLocalTime",
      "SetErrorMode",        "SHGetFolderPathA"};
  return names;
}

void SynthSpec::validate() const {
  if (families.empty()) throw DataError("synth: spec has no families");
  for (const auto& f : families) {
    const std::string where = "synth: family '" + f.name + "': ";
    if (f.name.empty()) throw DataError("synth: family without a name");
    if (f.count < 1) throw DataError(where + "count must be at least 1");
    if (!(f.length_mean >= 1.0) || f.length_spread < 0.0 || f.length_mean - f.length_spread < 1.0) {
      throw DataError(where + "length range must stay at or above 1");
    }
    for (double r : f.fap_rates) {
      if (!(r >= 0.0 && r <= 1.0)) throw DataError(where + "FAP rate outside [0,1]");
    }
    if (f.fap_min_repeats > f.fap_max_repeats || f.fap_min_repeats < 1) {
      throw DataError(where + "bad FAP repeat range");
    }
    for (const auto& m : f.motifs) {
      if (m.calls.empty()) throw DataError(where + "empty motif");
      if (!(m.probability >= 0.0 && m.probability <= 1.0)) throw DataError(where + "motif probability outside [0,1]");
      if (m.min_repeats > m.max_repeats) throw DataError(where + "motif repeat range out of order");
      if (f.length_mean < static_cast<double>(m.calls.size())) throw DataError(where + "mean length below motif length");
      for (const auto& c : m.calls) {
        if (!is_valid_api_name(c)) throw DataError(where + "bad motif call '" + c + "'");
      }
    }
    for (const auto& b : f.background) {
      if (!is_valid_api_name(b)) throw DataError(where + "bad background call '" + b + "'");
      if (FapSet::standard().slot_of_original(b)) throw DataError(where + "background call '" + b + "' is a FAP API");
    }
  }
}

Trace generate_trace(const FamilyProfile& profile, std::uint64_t seed, std::size_t index) {
  const FapSet& fset = FapSet::standard();
  Rng rng = Rng::substream(seed, index);
  const auto lo = static_cast<std::int64_t>(std::llround(profile.length_mean - profile.length_spread));
  const auto hi = static_cast<std::int64_t>(std::llround(profile.length_mean + profile.length_spread));
  const auto length = static_cast<std::size_t>(rng.between(lo, hi));

  std::vector<Chunk> chunks;
  for (const Motif& m : profile.motifs) {
    if (!rng.bernoulli(m.probability)) continue;
    const auto reps = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(m.min_repeats), static_cast<std::int64_t>(m.max_repeats)));
    for (std::size_t r = 0; r < reps; ++r) {
      Chunk c;
      for (const auto& call : m.calls) c.push_back(resolve(call, rng, fset));
      chunks.push_back(std::move(c));
    }
  }
  for (std::size_t slot = 0; slot < kFapLength; ++slot) {
    if (!rng.bernoulli(profile.fap_rates[slot])) continue;
    const auto reps = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(profile.fap_min_repeats),
                                                           static_cast<std::int64_t>(profile.fap_max_repeats)));
    for (std::size_t r = 0; r < reps; ++r) chunks.push_back({pick(rng, fset.originals(slot))});
  }

  std::size_t planted = 0;
  for (const auto& c : chunks) planted += c.size();
  const auto& alphabet = profile.background.empty() ? default_background() : profile.background;
  const std::size_t fill = length > planted ? length - planted : 0;
  std::vector<std::string> background(fill);
  for (auto& b : background) b = pick(rng, alphabet);

  // Each chunk lands in one of the fill+1 gaps of the background.
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (gap, chunk)
  for (std::size_t i = 0; i < chunks.size(); ++i) slots.push_back({rng.below(fill + 1), i});
  std::sort(slots.begin(), slots.end());

  Trace t;
  t.family = profile.name;
  char id[32];
  std::snprintf(id, sizeof id, "s%06zu", index);
  t.id = id;
  t.calls.reserve(fill + planted);
  std::size_t next = 0;
  for (std::size_t gap = 0; gap <= fill; ++gap) {
    while (next < slots.size() && slots[next].first == gap) {
      const Chunk& c = chunks[slots[next].second];
      t.calls.insert(t.calls.end(), c.begin(), c.end());
      ++next;
    }
    if (gap < fill) t.calls.push_back(std::move(background[gap]));
  }
  return t;
}

std::vector<Trace> generate_corpus(const SynthSpec& spec) {
  spec.validate();
  std::size_t total = 0;
  for (const auto& f : spec.families) total += f.count;
  std::vector<Trace> out(total);
  std::vector<const FamilyProfile*> owner(total);
  std::size_t k = 0;
  for (const auto& f : spec.families) {
    for (std::size_t i = 0; i < f.count; ++i) owner[k++] = &f;
  }
#if defined(FAPLEARN_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < total; ++i) out[i] = generate_trace(*owner[i], spec.seed, i);
  return out;
}

SynthSpec default_benchmark_spec() {
  SynthSpec spec;
  spec.seed = 20190417;
  auto trojan = base_profile("trojan-fakeav", 500, 235.0, 50.0);
  trojan.motifs = {kTrojanMotif};
  trojan.fap_rates = kTrojanRates;
  auto adware = base_profile("adware", 500, 235.0, 50.0);
  adware.motifs = {kAdwareMotif, kTempTriplet};
  adware.fap_rates = kAdwareRates;
  // Same file behaviour as trojan-fakeav; only the unpacking motif differs.
  auto packed = base_profile("packed", 500, 235.0, 50.0);
  packed.motifs = {kPackedMotif};
  packed.fap_rates = kTrojanRates;
  auto worm = base_profile("worm", 500, 235.0, 50.0);
  worm.motifs = {kWormMotif};
  worm.fap_rates = kWormRates;
  spec.families = {trojan, adware, packed, worm};
  return spec;
}

SynthSpec fine_grained_spec() {
  struct Row {
    const char* name;
    std::size_t count;
    double mean;
  };
  const Row rows[] = {{"adware.win32.megasearch", 658, 155},  {"adware.win32.downloadware", 160, 400},
                      {"adware.win32.screensaver", 78, 424},  {"worm.win32.wbna", 54, 470},
                      {"net-worm.win32.allaple", 48, 290},    {"trojan-fakeav.win32.smartfortress", 482, 217},
                      {"packed.win32.krap", 318, 193},        {"downloader.win32.lmn", 176, 297}};
  SynthSpec spec;
  spec.seed = 20190418;
  for (const Row& r : rows) {
    auto p = base_profile(r.name, r.count, r.mean, std::round(r.mean * 0.2));
    const std::string n = r.name;
    if (n == "adware.win32.megasearch") {
      p.motifs = {kAdwareMotif, kTempTriplet};
      p.fap_rates = kAdwareRates;
    } else if (n.rfind("adware", 0) == 0) {
      p.motifs = {kAdwareMotif, {{"RegSetValueExA", n == "adware.win32.screensaver" ? "SystemParametersInfoA"
                                                                                    : "CreateProcessA"},
                                 1.0, 1, 2}};
      p.fap_rates = {1.0, 0.8, 0.05, 0.05, 1.0, 0.02, 0.1};
    } else if (n == "net-worm.win32.allaple") {
      p.motifs = {kWormMotif};
      p.fap_rates = kWormRates;
    } else if (n == "worm.win32.wbna") {
      p.motifs = {{{"GetLogicalDrives", "GetDriveTypeA", "FindFirstFileA"}, 1.0, 1, 3}};
      p.fap_rates = {1.0, 0.3, 0.0, 0.1, 0.9, 0.1, 0.05};
    } else if (n.rfind("trojan", 0) == 0) {
      p.motifs = {kTrojanMotif};
      p.fap_rates = kTrojanRates;
    } else if (n.rfind("packed", 0) == 0) {
      p.motifs = {kPackedMotif};
      p.fap_rates = kTrojanRates;
    } else {
      p.motifs = {kDownloaderMotif};
      p.fap_rates = {1.0, 0.5, 0.2, 0.0, 1.0, 0.0, 0.2};
    }
    spec.families.push_back(std::move(p));
  }
  return spec;
}

SynthSpec synth_spec_from(const ConfigFile& file) {
  for (const auto& e : file.global.entries()) {
    if (e.key != "seed") throw MalformedLine(e.line, "unknown global key '" + e.key + "'");
  }
  SynthSpec spec;
  const long long seed = file.global.get_int("seed", 0);
  if (seed < 0) throw DataError("synth: seed must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  const FapSet& fset = FapSet::standard();
  for (const auto& s : file.sections) {
    if (s.name() != "family") throw DataError("synth: unknown section [" + s.name() + "]");
    FamilyProfile p;
    for (const auto& e : s.entries()) {
      if (e.key == "name") {
        p.name = e.value;
      } else if (e.key == "count") {
        const long long c = s.get_int("count", 0);
        if (c < 0) throw MalformedLine(e.line, "count must be non-negative");
        p.count = static_cast<std::size_t>(c);
      } else if (e.key == "length_mean") {
        p.length_mean = s.get_double("length_mean", 0.0);
      } else if (e.key == "length_spread") {
        p.length_spread = s.get_double("length_spread", 0.0);
      } else if (e.key == "background") {
        p.background = split_list(e.value);
      } else if (e.key == "fap_repeats") {
        std::tie(p.fap_min_repeats, p.fap_max_repeats) = parse_range(e.value, e.line);
      } else if (e.key == "motif") {
        std::istringstream in(e.value);
        double prob = 0.0;
        std::string range, calls;
        if (!(in >> prob >> range >> calls)) throw MalformedLine(e.line, "motif needs '<prob> <min>-<max> calls'");
        Motif m;
        m.probability = prob;
        std::tie(m.min_repeats, m.max_repeats) = parse_range(range, e.line);
        m.calls = split_list(calls);
        p.motifs.push_back(std::move(m));
      } else if (e.key.rfind("rate.", 0) == 0) {
        const auto slot = fset.slot_of_canonical(e.key.substr(5));
        if (!slot) throw MalformedLine(e.line, "unknown FAP API in '" + e.key + "'");
        try {
          std::size_t used = 0;
          p.fap_rates[*slot] = std::stod(e.value, &used);
          if (used != e.value.size()) throw std::invalid_argument(e.value);
        } catch (const std::exception&) {
          throw MalformedLine(e.line, "bad rate '" + e.value + "'");
        }
      } else {
        throw MalformedLine(e.line, "unknown family key '" + e.key + "'");
      }
    }
    spec.families.push_back(std::move(p));
  }
  spec.validate();
  return spec;
}

SynthSpec load_synth_spec(const std::string& path) { return synth_spec_from(load_config(path)); }

void write_synth_spec(std::ostream& out, const SynthSpec& spec) {
  const FapSet& fset = FapSet::standard();
  out << "seed = " << spec.seed << '\n';
  for (const auto& f : spec.families) {
    out << "\n[family]\n";
    out << "name = " << f.name << '\n';
    out << "count = " << f.count << '\n';
    out << "length_mean = " << format_prob(f.length_mean) << '\n';
    out << "length_spread = " << format_prob(f.length_spread) << '\n';
    if (!f.background.empty()) out << "background = " << join(f.background) << '\n';
    for (const auto& m : f.motifs) {
      out << "motif = " << format_prob(m.probability) << ' ' << m.min_repeats << '-' << m.max_repeats << ' '
          << join(m.calls) << '\n';
    }
    for (std::size_t slot = 0; slot < kFapLength; ++slot) {
      if (f.fap_rates[slot] != 0.0) {
        out << "rate." << fset.canonical()[slot] << " = " << format_prob(f.fap_rates[slot]) << '\n';
      }
    }
    out << "fap_repeats = " << f.fap_min_repeats << '-' << f.fap_max_repeats << '\n';
  }
}

}  // namespace faplearn
