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

#ifndef FAPLEARN_KERNELS_HPP
#define FAPLEARN_KERNELS_HPP

#include <cstddef>
#include <span>

// Dense row-major matrix products used by the tensor core.
//
//   gemm_nn:  C (m x n) (+)= A (m x k) * B (k x n)
//   gemm_nt:  C (m x n) (+)= A (m x k) * B^T, B is (n x k)
//   gemm_tn:  C (k x n) (+)= A^T * B, A is (m x k), B is (m x n)
//
// `serial` holds the plain triple loops kept as the reference for tests and
// benchmarks. `parallel` holds the cache-friendly loop orders, split across
// OpenMP threads by output row. Each output element is reduced by a single
// thread in a fixed order, so parallel results do not depend on the thread
// count.
namespace faplearn::kernels {

namespace serial {
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate);
}  // namespace serial

namespace parallel {
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, std::span<const double> a,
             std::span<const double> b, std::span<double> c, bool accumulate);
}  // namespace parallel

// Column sums of an (m x n) matrix added into `out` (length n).
void add_column_sums(std::size_t m, std::size_t n, std::span<const double> a,
                     std::span<double> out);

int max_threads();
// Products smaller than this many multiply-adds stay on the calling thread.
inline constexpr std::size_t kParallelThreshold = 1 << 16;

}  // namespace faplearn::kernels

#endif  // FAPLEARN_KERNELS_HPP
