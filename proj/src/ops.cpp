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

#include "faplearn/ops.hpp"

#include <algorithm>
#include <cmath>

#include "faplearn/error.hpp"
#include "faplearn/kernels.hpp"

namespace faplearn::numeric {
namespace {

void require_matrix(const Tensor& a, const char* op) {
  if (a.rank() != 2) throw ShapeMismatch(std::string(op) + ": expected a matrix, got shape " + a.shape_string());
}

void require_same(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(op) + ": shapes " + a.shape_string() + " and " + b.shape_string());
  }
}

void softmax_row(std::span<const double> in, std::span<double> out) {
  const double mx = *std::max_element(in.begin(), in.end());
  double total = 0.0;
  for (std::size_t j = 0; j < in.size(); ++j) {
    out[j] = std::exp(in[j] - mx);
    total += out[j];
  }
  for (double& v : out) v /= total;
}

double weight_of(std::span<const double> weights, std::size_t r) {
  return weights.empty() ? 1.0 : weights[r];
}

void check_targets(const Tensor& q, std::span<const std::uint32_t> targets,
                   std::span<const double> weights, const char* op) {
  if (targets.size() != q.rows()) throw ShapeMismatch(std::string(op) + ": one target per row required");
  if (!weights.empty() && weights.size() != q.rows()) {
    throw ShapeMismatch(std::string(op) + ": one weight per row required");
  }
  for (std::size_t r = 0; r < targets.size(); ++r) {
    if (weight_of(weights, r) != 0.0 && targets[r] >= q.cols()) {
      throw ShapeMismatch(std::string(op) + ": target index out of range");
    }
  }
}

template <typename Fwd, typename Deriv>
Var unary(Tape& t, Var a, Fwd fwd, Deriv deriv) {
  Tensor y = t.value(a);
  for (double& v : y.data()) v = fwd(v);
  Tensor saved = y;
  return t.record(std::move(y), t.requires_grad(a),
                  [a, saved = std::move(saved), deriv](Tape& tp, const Tensor& g) {
                    Tensor& ga = tp.grad(a);
                    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * deriv(saved[i]);
                  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("matmul: inner dimensions of " + a.shape_string() + " and " + b.shape_string());
  }
  Tensor c(a.rows(), b.cols());
  kernels::parallel::gemm_nn(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data(), false);
  return c;
}

Tensor softmax(const Tensor& logits) {
  if (logits.cols() == 0) throw ShapeMismatch("softmax: empty input");
  if (!logits.all_finite()) throw NonFiniteValue("softmax: non-finite input");
  Tensor out = logits;
  for (std::size_t r = 0; r < logits.rows(); ++r) softmax_row(logits.row(r), out.row(r));
  return out;
}

double cross_entropy(std::size_t target, std::span<const double> q) {
  if (target >= q.size()) throw InvalidDistribution("cross_entropy: target index out of range");
  double total = 0.0;
  for (double v : q) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidDistribution("cross_entropy: invalid probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidDistribution("cross_entropy: probabilities do not sum to 1");
  return -std::log(std::max(q[target], kLogClamp));
}

Var matmul(Tape& t, Var a, Var b) {
  const Tensor& va = t.value(a);
  const Tensor& vb = t.value(b);
  Tensor c = matmul(va, vb);
  const std::size_t m = va.rows(), k = va.cols(), n = vb.cols();
  return t.record(std::move(c), t.requires_grad(a) || t.requires_grad(b),
                  [a, b, m, k, n](Tape& tp, const Tensor& g) {
                    if (tp.requires_grad(a)) {
                      kernels::parallel::gemm_nt(m, k, n, g.data(), tp.value(b).data(), tp.grad(a).data(), true);
                    }
                    if (tp.requires_grad(b)) {
                      kernels::parallel::gemm_tn(m, n, k, tp.value(a).data(), g.data(), tp.grad(b).data(), true);
                    }
                  });
}

Var add(Tape& t, Var a, Var b) {
  const Tensor& va = t.value(a);
  const Tensor& vb = t.value(b);
  require_same(va, vb, "add");
  Tensor c = va;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += vb[i];
  return t.record(std::move(c), t.requires_grad(a) || t.requires_grad(b), [a, b](Tape& tp, const Tensor& g) {
    for (Var v : {a, b}) {
      if (!tp.requires_grad(v)) continue;
      Tensor& gv = tp.grad(v);
      for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
    }
  });
}

Var mul(Tape& t, Var a, Var b) {
  const Tensor& va = t.value(a);
  const Tensor& vb = t.value(b);
  require_same(va, vb, "mul");
  Tensor c = va;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= vb[i];
  return t.record(std::move(c), t.requires_grad(a) || t.requires_grad(b), [a, b](Tape& tp, const Tensor& g) {
    if (tp.requires_grad(a)) {
      Tensor& ga = tp.grad(a);
      const Tensor& vb = tp.value(b);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * vb[i];
    }
    if (tp.requires_grad(b)) {
      Tensor& gb = tp.grad(b);
      const Tensor& va = tp.value(a);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * va[i];
    }
  });
}

Var sigmoid(Tape& t, Var a) {
  return unary(t, a, [](double x) { return sigmoid(x); },
               [](double y) { return y * (1.0 - y); });
}

Var tanh(Tape& t, Var a) {
  return unary(t, a, [](double x) { return std::tanh(x); },
               [](double y) { return 1.0 - y * y; });
}

Var one_minus(Tape& t, Var a) {
  return unary(t, a, [](double x) { return 1.0 - x; }, [](double) { return -1.0; });
}

Var scale(Tape& t, Var a, double factor) {
  return unary(t, a, [factor](double x) { return factor * x; },
               [factor](double) { return factor; });
}

Var elementwise(Tape& t, Elementwise kind, Var a, Var b) {
  switch (kind) {
    case Elementwise::add: return add(t, a, b);
    case Elementwise::mul: return mul(t, a, b);
    case Elementwise::sigmoid: return sigmoid(t, a);
    case Elementwise::tanh: return tanh(t, a);
    case Elementwise::one_minus: return one_minus(t, a);
  }
  throw NumericError("elementwise: unknown kind");
}

Var add_bias(Tape& t, Var x, Var bias) {
  const Tensor& vx = t.value(x);
  const Tensor& vb = t.value(bias);
  if (vb.size() != vx.cols()) throw ShapeMismatch("add_bias: bias length does not match columns");
  Tensor c = vx;
  for (std::size_t r = 0; r < c.rows(); ++r) {
    auto row = c.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += vb[j];
  }
  const std::size_t m = vx.rows(), n = vx.cols();
  return t.record(std::move(c), t.requires_grad(x) || t.requires_grad(bias),
                  [x, bias, m, n](Tape& tp, const Tensor& g) {
                    if (tp.requires_grad(x)) {
                      Tensor& gx = tp.grad(x);
                      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                    }
                    if (tp.requires_grad(bias)) kernels::add_column_sums(m, n, g.data(), tp.grad(bias).data());
                  });
}

Var sum(Tape& t, Var a) {
  Tensor s(1);
  s[0] = t.value(a).sum();
  return t.record(std::move(s), t.requires_grad(a), [a](Tape& tp, const Tensor& g) {
    for (double& v : tp.grad(a).data()) v += g[0];
  });
}

Var gather_rows(Tape& t, Var table, std::span<const std::uint32_t> indices) {
  const Tensor& tab = t.value(table);
  const std::size_t cols = tab.cols();
  Tensor out(indices.size(), cols);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= tab.rows()) throw ShapeMismatch("gather_rows: index out of range");
    std::copy_n(tab.row(indices[r]).begin(), cols, out.row(r).begin());
  }
  std::vector<std::uint32_t> idx(indices.begin(), indices.end());
  return t.record(std::move(out), t.requires_grad(table), [table, idx = std::move(idx)](Tape& tp, const Tensor& g) {
    Tensor& gt = tp.grad(table);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      auto dst = gt.row(idx[r]);
      auto src = g.row(r);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
  });
}

Var concat_cols(Tape& t, Var a, Var b) {
  const Tensor& va = t.value(a);
  const Tensor& vb = t.value(b);
  require_matrix(va, "concat_cols");
  require_matrix(vb, "concat_cols");
  if (va.rows() != vb.rows()) throw ShapeMismatch("concat_cols: row counts differ");
  const std::size_t na = va.cols(), nb = vb.cols();
  Tensor c(va.rows(), na + nb);
  for (std::size_t r = 0; r < va.rows(); ++r) {
    std::copy_n(va.row(r).begin(), na, c.row(r).begin());
    std::copy_n(vb.row(r).begin(), nb, c.row(r).begin() + na);
  }
  return t.record(std::move(c), t.requires_grad(a) || t.requires_grad(b), [a, b, na, nb](Tape& tp, const Tensor& g) {
    for (std::size_t r = 0; r < g.rows(); ++r) {
      auto gr = g.row(r);
      if (tp.requires_grad(a)) {
        auto dst = tp.grad(a).row(r);
        for (std::size_t j = 0; j < na; ++j) dst[j] += gr[j];
      }
      if (tp.requires_grad(b)) {
        auto dst = tp.grad(b).row(r);
        for (std::size_t j = 0; j < nb; ++j) dst[j] += gr[na + j];
      }
    }
  });
}

Var softmax(Tape& t, Var logits) {
  Tensor q = softmax(t.value(logits));
  Tensor saved = q;
  return t.record(std::move(q), t.requires_grad(logits), [logits, saved = std::move(saved)](Tape& tp, const Tensor& g) {
    Tensor& gl = tp.grad(logits);
    for (std::size_t r = 0; r < saved.rows(); ++r) {
      auto y = saved.row(r);
      auto gr = g.row(r);
      double dot = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) dot += gr[j] * y[j];
      auto dst = gl.row(r);
      for (std::size_t j = 0; j < y.size(); ++j) dst[j] += y[j] * (gr[j] - dot);
    }
  });
}

Var cross_entropy(Tape& t, Var probs, std::span<const std::uint32_t> targets, std::span<const double> weights) {
  const Tensor& q = t.value(probs);
  check_targets(q, targets, weights, "cross_entropy");
  Tensor loss(1);
  for (std::size_t r = 0; r < q.rows(); ++r) {
    const double w = weight_of(weights, r);
    if (w != 0.0) loss[0] += w * cross_entropy(targets[r], q.row(r));
  }
  std::vector<std::uint32_t> tg(targets.begin(), targets.end());
  std::vector<double> wt(weights.begin(), weights.end());
  return t.record(std::move(loss), t.requires_grad(probs),
                  [probs, tg = std::move(tg), wt = std::move(wt)](Tape& tp, const Tensor& g) {
                    const Tensor& q = tp.value(probs);
                    Tensor& gq = tp.grad(probs);
                    for (std::size_t r = 0; r < q.rows(); ++r) {
                      const double w = weight_of(wt, r);
                      const double p = q.at(r, tg[r]);
                      if (w == 0.0 || p <= kLogClamp) continue;
                      gq.at(r, tg[r]) -= g[0] * w / p;
                    }
                  });
}

Var softmax_cross_entropy(Tape& t, Var logits, std::span<const std::uint32_t> targets,
                          std::span<const double> weights) {
  Tensor q = softmax(t.value(logits));
  check_targets(q, targets, weights, "softmax_cross_entropy");
  Tensor loss(1);
  for (std::size_t r = 0; r < q.rows(); ++r) {
    const double w = weight_of(weights, r);
    if (w != 0.0) loss[0] += w * -std::log(std::max(q.at(r, targets[r]), kLogClamp));
  }
  std::vector<std::uint32_t> tg(targets.begin(), targets.end());
  std::vector<double> wt(weights.begin(), weights.end());
  return t.record(std::move(loss), t.requires_grad(logits),
                  [logits, q = std::move(q), tg = std::move(tg), wt = std::move(wt)](Tape& tp, const Tensor& g) {
                    Tensor& gl = tp.grad(logits);
                    for (std::size_t r = 0; r < q.rows(); ++r) {
                      const double w = weight_of(wt, r);
                      // Below the clamp the loss is flat in the logits.
                      if (w == 0.0 || q.at(r, tg[r]) <= kLogClamp) continue;
                      auto qr = q.row(r);
                      auto dst = gl.row(r);
                      const double s = g[0] * w;
                      for (std::size_t j = 0; j < qr.size(); ++j) dst[j] += s * qr[j];
                      dst[tg[r]] -= s;
                    }
                  });
}

}  // namespace faplearn::numeric
