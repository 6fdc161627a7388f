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

#include "faplearn/kernels.hpp"

#include <algorithm>
#include <vector>

#ifdef FAPLEARN_HAVE_OPENMP
#include <omp.h>
#endif

#include "faplearn/error.hpp"

namespace faplearn::kernels {
namespace {

void check(std::size_t need, std::size_t have, const char* what) {
  if (have < need) throw ShapeMismatch(std::string("gemm: operand ") + what + " too small");
}

}  // namespace

int max_threads() {
#ifdef FAPLEARN_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate) {
  check(m * k, a.size(), "A");
  check(k * n, b.size(), "B");
  check(m * n, c.size(), "C");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      c[i * n + j] = accumulate ? c[i * n + j] + s : s;
    }
  }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate) {
  check(m * k, a.size(), "A");
  check(n * k, b.size(), "B");
  check(m * n, c.size(), "C");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[j * k + p];
      c[i * n + j] = accumulate ? c[i * n + j] + s : s;
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate) {
  check(m * k, a.size(), "A");
  check(m * n, b.size(), "B");
  check(k * n, c.size(), "C");
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += a[i * k + p] * b[i * n + j];
      c[p * n + j] = accumulate ? c[p * n + j] + s : s;
    }
  }
}

}  // namespace serial

namespace parallel {

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate) {
  check(m * k, a.size(), "A");
  check(k * n, b.size(), "B");
  check(m * n, c.size(), "C");
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  // Four output rows share each pass over a row of B.
  const long blocks = static_cast<long>((m + 3) / 4);
#pragma omp parallel for schedule(static) if (m * n * k >= kParallelThreshold)
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t i0 = static_cast<std::size_t>(blk) * 4;
    const std::size_t rows = std::min<std::size_t>(4, m - i0);
    if (!accumulate) std::fill(pc + i0 * n, pc + (i0 + rows) * n, 0.0);
    if (rows == 4) {
      double* __restrict c0 = pc + i0 * n;
      double* __restrict c1 = c0 + n;
      double* __restrict c2 = c1 + n;
      double* __restrict c3 = c2 + n;
      for (std::size_t p = 0; p < k; ++p) {
        const double a0 = pa[i0 * k + p], a1 = pa[(i0 + 1) * k + p];
        const double a2 = pa[(i0 + 2) * k + p], a3 = pa[(i0 + 3) * k + p];
        const double* __restrict bp = pb + p * n;
        for (std::size_t j = 0; j < n; ++j) {
          const double bj = bp[j];
          c0[j] += a0 * bj;
          c1[j] += a1 * bj;
          c2[j] += a2 * bj;
          c3[j] += a3 * bj;
        }
      }
      continue;
    }
    for (std::size_t i = i0; i < i0 + rows; ++i) {
      double* __restrict ci = pc + i * n;
      const double* ai = pa + i * k;
      for (std::size_t p = 0; p < k; ++p) {
        const double aip = ai[p];
        const double* __restrict bp = pb + p * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
      }
    }
  }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate) {
  check(m * k, a.size(), "A");
  check(n * k, b.size(), "B");
  check(m * n, c.size(), "C");
  // Materialize B^T so the inner loop runs over contiguous memory.
  thread_local std::vector<double> bt;
  bt.resize(k * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < k; ++p) bt[p * n + j] = b[j * k + p];
  }
  gemm_nn(m, n, k, a, bt, c, accumulate);
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate) {
  check(m * k, a.size(), "A");
  check(m * n, b.size(), "B");
  check(k * n, c.size(), "C");
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  const long blocks = static_cast<long>((k + 3) / 4);
#pragma omp parallel for schedule(static) if (m * n * k >= kParallelThreshold)
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t p0 = static_cast<std::size_t>(blk) * 4;
    const std::size_t rows = std::min<std::size_t>(4, k - p0);
    if (!accumulate) std::fill(pc + p0 * n, pc + (p0 + rows) * n, 0.0);
    if (rows == 4) {
      double* __restrict c0 = pc + p0 * n;
      double* __restrict c1 = c0 + n;
      double* __restrict c2 = c1 + n;
      double* __restrict c3 = c2 + n;
      for (std::size_t i = 0; i < m; ++i) {
        const double* ai = pa + i * k + p0;
        const double a0 = ai[0], a1 = ai[1], a2 = ai[2], a3 = ai[3];
        const double* __restrict bi = pb + i * n;
        for (std::size_t j = 0; j < n; ++j) {
          const double bj = bi[j];
          c0[j] += a0 * bj;
          c1[j] += a1 * bj;
          c2[j] += a2 * bj;
          c3[j] += a3 * bj;
        }
      }
      continue;
    }
    for (std::size_t p = p0; p < p0 + rows; ++p) {
      double* __restrict cp = pc + p * n;
      for (std::size_t i = 0; i < m; ++i) {
        const double aip = pa[i * k + p];
        const double* __restrict bi = pb + i * n;
        for (std::size_t j = 0; j < n; ++j) cp[j] += aip * bi[j];
      }
    }
  }
}

}  // namespace parallel

void add_column_sums(std::size_t m, std::size_t n, std::span<const double> a,
                     std::span<double> out) {
  check(m * n, a.size(), "A");
  check(n, out.size(), "out");
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] += ai[j];
  }
}

}  // namespace faplearn::kernels
