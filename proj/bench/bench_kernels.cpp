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

// Serial reference kernels against the OpenMP kernels.
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "faplearn/gru.hpp"
#include "faplearn/kernels.hpp"
#include "faplearn/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using GemmFn = void (*)(std::size_t, std::size_t, std::size_t, std::span<const double>,
                        std::span<const double>, std::span<double>, bool);

double seconds_per_call(const std::function<void()>& fn) {
  fn();
  std::size_t reps = 1;
  for (;;) {
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < reps; ++i) fn();
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (s > 0.2) return s / static_cast<double>(reps);
    reps *= 2;
  }
}

std::vector<double> random_values(std::size_t n, faplearn::Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

int main() {
  using namespace faplearn;
  Rng rng(7);
  std::printf("threads: %d\n", kernels::max_threads());
  std::printf("%-8s %6s %6s %6s %12s %12s %8s\n", "kernel", "m", "n", "k", "serial_us", "parallel_us", "speedup");

  const struct {
    const char* name;
    GemmFn serial;
    GemmFn parallel;
  } kinds[] = {{"gemm_nn", kernels::serial::gemm_nn, kernels::parallel::gemm_nn},
               {"gemm_nt", kernels::serial::gemm_nt, kernels::parallel::gemm_nt},
               {"gemm_tn", kernels::serial::gemm_tn, kernels::parallel::gemm_tn}};
  const std::size_t shapes[][3] = {{32, 128, 64}, {32, 128, 128}, {64, 256, 256}, {256, 256, 256}};

  for (const auto& kind : kinds) {
    for (const auto& s : shapes) {
      const std::size_t m = s[0], n = s[1], k = s[2];
      const bool tn = kind.serial == kernels::serial::gemm_tn;
      const auto a = random_values(m * k, rng);
      const auto b = random_values(tn ? m * n : k * n, rng);
      std::vector<double> c(tn ? k * n : m * n);
      const double ts = seconds_per_call([&] { kind.serial(m, n, k, a, b, c, false); });
      const double tp = seconds_per_call([&] { kind.parallel(m, n, k, a, b, c, false); });
      std::printf("%-8s %6zu %6zu %6zu %12.2f %12.2f %8.2f\n", kind.name, m, n, k, ts * 1e6, tp * 1e6, ts / tp);
    }
  }

  for (const std::size_t batch : {1, 32}) {
    GruCell cell("bench", 64, 128);
    cell.initialize(rng);
    Tensor x = Tensor::matrix(batch, 64, random_values(batch * 64, rng));
    Tensor h = Tensor::matrix(batch, 128, random_values(batch * 128, rng));
    const double tf = seconds_per_call([&] { gru_forward(cell, x, h); });
    const double tb = seconds_per_call([&] {
      Tape tape;
      Var xv = tape.constant(x), hv = tape.constant(h);
      Var out = gru_step(tape, cell, xv, hv);
      Var loss = tape.record(Tensor(1, tape.value(out).sum()), true, [out](Tape& t, const Tensor& g) {
        for (double& v : t.grad(out).data()) v += g[0];
      });
      tape.backward(loss);
    });
    std::printf("gru_step B=%-3zu forward %10.2f us, forward+backward %10.2f us\n", batch, tf * 1e6, tb * 1e6);
  }
  return 0;
}
