// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "gcnsum/error.hpp"

namespace gcnsum {

const Tensor& Var::value() const { return tape_->value(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, {}, {}, nullptr, false, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant_ref(const Tensor& value) {
  nodes_.push_back(Node{{}, {}, {}, {}, nullptr, false, &value});
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(Param& p) {
  nodes_.push_back(Node{{}, {}, {}, {}, &p, true, &p.value});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, std::vector<std::size_t> inputs, BackwardFn backward) {
  bool req = false;
  for (auto i : inputs) req = req || nodes_[i].requires_grad;
  if (!req) backward = nullptr;
  nodes_.push_back(Node{std::move(value), {}, std::move(inputs), std::move(backward),
                        nullptr, req, nullptr});
  return Var(this, nodes_.size() - 1);
}

Tensor& Tape::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor::zeros_like(n.external ? *n.external : n.value);
  return n.grad;
}

void Tape::backward(const Var& loss) {
  if (loss.tape() != this) throw InvalidArgument("backward: loss belongs to another tape");
  if (value(loss.id()).numel() != 1)
    throw DimensionError("backward: loss must be scalar, got " +
                         shape_str(value(loss.id()).shape()));
  for (auto& n : nodes_) n.grad = Tensor();
  grad(loss.id()).fill(1.0);
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param) {
      auto dst = n.param->grad.values();
      auto src = n.grad.values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
}

namespace {

Tape& same_tape(const Var& a, const Var& b) {
  if (a.tape() != b.tape()) throw InvalidArgument("operands live on different tapes");
  return *a.tape();
}

bool needs(Tape& t, std::size_t id) { return t.requires_grad(id); }

void accumulate(Tensor& dst, const Tensor& src) {
  auto d = dst.values();
  auto s = src.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

// out = a(m x k) * b(k x n), with transposition flags.
void gemm(const double* a, const double* b, double* out, std::size_t m,
          std::size_t k, std::size_t n, bool ta, bool tb, bool accumulate_out) {
  if (!accumulate_out) std::fill(out, out + m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ta ? a[p * m + i] : a[i * k + p];
      if (av == 0.0) continue;
      double* orow = out + i * n;
      if (!tb) {
        const double* brow = b + p * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
      } else {
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * b[j * k + p];
      }
    }
  }
}

std::size_t broadcast_size(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() == b.shape()) return a.numel();
  if (a.numel() == 1) return b.numel();
  if (b.numel() == 1) return a.numel();
  throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                       " vs " + shape_str(b.shape()));
}

Var binary(Elementwise op, const Var& a, const Var& b) {
  Tape& t = same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const char* name = op == Elementwise::Add ? "add" : op == Elementwise::Sub ? "sub" : "mul";
  const std::size_t n = broadcast_size(av, bv, name);
  const Shape shape = av.numel() == n ? av.shape() : bv.shape();
  const bool a_b = av.numel() != n;  // a broadcast
  const bool b_b = bv.numel() != n;
  Tensor out(shape);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = av[a_b ? 0 : i];
    const double y = bv[b_b ? 0 : i];
    out[i] = op == Elementwise::Add ? x + y : op == Elementwise::Sub ? x - y : x * y;
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(out), {ia, ib}, [op, ia, ib, a_b, b_b, n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    if (needs(t, ia)) {
      Tensor& ga = t.grad(ia);
      for (std::size_t i = 0; i < n; ++i) {
        double d = g[i];
        if (op == Elementwise::Mul) d *= t.value(ib)[b_b ? 0 : i];
        ga[a_b ? 0 : i] += d;
      }
    }
    if (needs(t, ib)) {
      Tensor& gb = t.grad(ib);
      for (std::size_t i = 0; i < n; ++i) {
        double d = g[i];
        if (op == Elementwise::Sub) d = -d;
        if (op == Elementwise::Mul) d *= t.value(ia)[a_b ? 0 : i];
        gb[b_b ? 0 : i] += d;
      }
    }
  });
}

Var unary(Elementwise op, const Var& a) {
  Tape& t = *a.tape();
  Tensor out = a.value();
  for (auto& v : out.values()) {
    switch (op) {
      case Elementwise::Tanh: v = std::tanh(v); break;
      case Elementwise::Sigmoid:
        v = v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
        break;
      case Elementwise::Relu: v = v > 0 ? v : 0.0; break;
      default: throw InvalidArgument("elementwise: binary op given one argument");
    }
  }
  const std::size_t ia = a.id();
  return t.record(std::move(out), {ia}, [op, ia](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& y = t.value(self);
    const Tensor& x = t.value(ia);
    Tensor& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.numel(); ++i) {
      double d = 0.0;
      switch (op) {
        case Elementwise::Tanh: d = 1.0 - y[i] * y[i]; break;
        case Elementwise::Sigmoid: d = y[i] * (1.0 - y[i]); break;
        case Elementwise::Relu: d = x[i] > 0 ? 1.0 : 0.0; break;
        default: break;
      }
      ga[i] += g[i] * d;
    }
  });
}

}  // namespace

Var elementwise(Elementwise op, const Var& a) { return unary(op, a); }

Var elementwise(Elementwise op, const Var& a, const Var& b) {
  switch (op) {
    case Elementwise::Add:
    case Elementwise::Sub:
    case Elementwise::Mul: return binary(op, a, b);
    default: throw InvalidArgument("elementwise: unary op given two arguments");
  }
}

Var add(const Var& a, const Var& b) { return binary(Elementwise::Add, a, b); }
Var sub(const Var& a, const Var& b) { return binary(Elementwise::Sub, a, b); }
Var mul(const Var& a, const Var& b) { return binary(Elementwise::Mul, a, b); }
Var tanh(const Var& a) { return unary(Elementwise::Tanh, a); }
Var sigmoid(const Var& a) { return unary(Elementwise::Sigmoid, a); }
Var relu(const Var& a) { return unary(Elementwise::Relu, a); }

Var matmul(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || av.shape()[1] != bv.shape()[0])
    throw DimensionError("matmul: incompatible shapes " + shape_str(av.shape()) + " and " +
                         shape_str(bv.shape()));
  const std::size_t m = av.shape()[0], k = av.shape()[1];
  const std::size_t n = bv.rank() == 2 ? bv.shape()[1] : 1;
  Tensor out(bv.rank() == 2 ? Shape{m, n} : Shape{m});
  gemm(av.values().data(), bv.values().data(), out.values().data(), m, k, n, false, false,
       false);
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(out), {ia, ib}, [ia, ib, m, k, n](Tape& t, std::size_t self) {
    const double* g = t.grad(self).values().data();
    if (needs(t, ia)) {
      // dA = dC * B^T
      gemm(g, t.value(ib).values().data(), t.grad(ia).values().data(), m, n, k, false, true,
           true);
    }
    if (needs(t, ib)) {
      // dB = A^T * dC
      gemm(t.value(ia).values().data(), g, t.grad(ib).values().data(), k, m, n, true, false,
           true);
    }
  });
}

Var scale(const Var& a, double factor) {
  Tape& t = *a.tape();
  Tensor out = a.value();
  for (auto& v : out.values()) v *= factor;
  const std::size_t ia = a.id();
  return t.record(std::move(out), {ia}, [ia, factor](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += factor * g[i];
  });
}

Var log(const Var& a) {
  Tape& t = *a.tape();
  Tensor out = a.value();
  for (auto& v : out.values()) {
    if (!(v > 0.0)) throw NumericError("log: non-positive argument");
    v = std::log(v);
  }
  const std::size_t ia = a.id();
  return t.record(std::move(out), {ia}, [ia](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& x = t.value(ia);
    Tensor& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += g[i] / x[i];
  });
}

Var sum(const Var& a) {
  Tape& t = *a.tape();
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  const std::size_t ia = a.id();
  return t.record(Tensor::scalar(s), {ia}, [ia](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    for (auto& v : t.grad(ia).values()) v += g;
  });
}

Var softmax(const Var& a) {
  Tape& t = *a.tape();
  const Tensor& x = a.value();
  if (x.rank() != 1) throw DimensionError("softmax: expected a vector, got " + shape_str(x.shape()));
  Tensor out = x;
  const double mx = *std::max_element(out.values().begin(), out.values().end());
  double z = 0.0;
  for (auto& v : out.values()) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : out.values()) v /= z;
  const std::size_t ia = a.id();
  return t.record(std::move(out), {ia}, [ia](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& y = t.value(self);
    double dot = 0.0;
    for (std::size_t i = 0; i < g.numel(); ++i) dot += g[i] * y[i];
    Tensor& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += y[i] * (g[i] - dot);
  });
}

Var transpose(const Var& a) {
  Tape& t = *a.tape();
  const Tensor& x = a.value();
  const std::size_t r = x.rows(), c = x.cols();
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out.at(j, i) = x.at(i, j);
  const std::size_t ia = a.id();
  return t.record(std::move(out), {ia}, [ia, r, c](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(ia);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga.at(i, j) += g.at(j, i);
  });
}

Var row(const Var& m, std::size_t r) {
  Tape& t = *m.tape();
  const Tensor& x = m.value();
  if (x.rank() != 2 || r >= x.rows())
    throw DimensionError("row: index " + std::to_string(r) + " out of range for " +
                         shape_str(x.shape()));
  auto src = x.row(r);
  Tensor out({src.size()}, std::vector<double>(src.begin(), src.end()));
  const std::size_t im = m.id();
  return t.record(std::move(out), {im}, [im, r](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    auto dst = t.grad(im).row(r);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += g[j];
  });
}

Var stack_rows(const std::vector<Var>& rows) {
  if (rows.empty()) throw DimensionError("stack_rows: no rows");
  Tape& t = *rows.front().tape();
  const Shape& s0 = rows.front().shape();
  if (s0.size() != 1) throw DimensionError("stack_rows: rows must be vectors");
  const std::size_t n = s0[0];
  Tensor out({rows.size(), n});
  std::vector<std::size_t> ids;
  ids.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].tape() != &t) throw InvalidArgument("stack_rows: mixed tapes");
    if (rows[i].shape() != s0)
      throw DimensionError("stack_rows: row " + std::to_string(i) + " has shape " +
                           shape_str(rows[i].shape()) + ", expected " + shape_str(s0));
    auto src = rows[i].value().values();
    std::copy(src.begin(), src.end(), out.row(i).begin());
    ids.push_back(rows[i].id());
  }
  return t.record(std::move(out), ids, [ids](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!needs(t, ids[i])) continue;
      auto src = g.row(i);
      auto& dst = t.grad(ids[i]);
      for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    }
  });
}

Var add_rowwise(const Var& m, const Var& v) {
  Tape& t = same_tape(m, v);
  const Tensor& mv = m.value();
  const Tensor& vv = v.value();
  if (mv.rank() != 2 || vv.rank() != 1 || vv.numel() != mv.cols())
    throw DimensionError("add_rowwise: shape mismatch " + shape_str(mv.shape()) + " vs " +
                         shape_str(vv.shape()));
  Tensor out = mv;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += vv[j];
  }
  const std::size_t im = m.id(), iv = v.id();
  return t.record(std::move(out), {im, iv}, [im, iv](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    if (needs(t, im)) accumulate(t.grad(im), g);
    if (needs(t, iv)) {
      Tensor& gv = t.grad(iv);
      for (std::size_t i = 0; i < g.rows(); ++i) {
        auto r = g.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) gv[j] += r[j];
      }
    }
  });
}

Var gather_rows(const Var& table, const std::vector<std::size_t>& indices) {
  Tape& t = *table.tape();
  const Tensor& tv = table.value();
  if (tv.rank() != 2) throw DimensionError("gather_rows: table must be a matrix");
  if (indices.empty()) throw DimensionError("gather_rows: no indices");
  Tensor out({indices.size(), tv.cols()});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= tv.rows())
      throw DimensionError("gather_rows: index " + std::to_string(indices[i]) +
                           " out of range for " + shape_str(tv.shape()));
    auto src = tv.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  const std::size_t it = table.id();
  return t.record(std::move(out), {it}, [it, indices](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    Tensor& gt = t.grad(it);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      auto src = g.row(i);
      auto dst = gt.row(indices[i]);
      for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    }
  });
}

Var mean(const std::vector<Var>& xs) {
  if (xs.empty()) throw DimensionError("mean: no operands");
  Var acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
  return xs.size() == 1 ? acc : scale(acc, 1.0 / static_cast<double>(xs.size()));
}

}  // namespace gcnsum
