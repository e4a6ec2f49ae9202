// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gcnsum/tensor.hpp"

namespace gcnsum {

/// A learnable tensor with its accumulated gradient.
struct Param {
  Param() = default;
  Param(std::string name, Tensor value)
      : name(std::move(name)), value(std::move(value)),
        grad(Tensor::zeros_like(this->value)) {}

  std::string name;
  Tensor value;
  Tensor grad;

  void zero_grad() { grad.fill(0.0); }
};

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; only valid while the
/// tape is alive.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }
  bool requires_grad() const;

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode tape. Nodes are appended in evaluation order, so reverse
/// insertion order is a valid topological order for the backward sweep.
///
/// A tape is single-threaded. Calling backward() twice on the same tape
/// re-runs the sweep and accumulates into the Param gradients a second time.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Constant that refers to `value` without copying; `value` must outlive
  /// the tape and stay unmodified while it is in use.
  Var constant_ref(const Tensor& value);
  /// Leaf bound to `p`; backward() adds this node's gradient into p.grad.
  /// The value is read from p.value directly, not copied.
  Var param(Param& p);

  Var record(Tensor value, std::vector<std::size_t> inputs, BackwardFn backward);

  const Tensor& value(std::size_t id) const {
    const Node& n = nodes_[id];
    return n.external ? *n.external : n.value;
  }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Gradient buffer of node `id`, allocated lazily as zeros.
  Tensor& grad(std::size_t id);
  std::size_t size() const noexcept { return nodes_.size(); }

  void backward(const Var& loss);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    Param* param = nullptr;
    bool requires_grad = false;
    const Tensor* external = nullptr;
  };
  std::vector<Node> nodes_;
};

enum class Elementwise { Tanh, Sigmoid, Relu, Add, Sub, Mul };

/// Unary ops take one argument, binary ops two. Binary ops broadcast an
/// argument with a single element.
Var elementwise(Elementwise op, const Var& a);
Var elementwise(Elementwise op, const Var& a, const Var& b);

Var matmul(const Var& a, const Var& b);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double factor);
Var tanh(const Var& a);
Var sigmoid(const Var& a);
Var relu(const Var& a);
Var log(const Var& a);
Var sum(const Var& a);
Var softmax(const Var& a);
Var transpose(const Var& a);
/// Row `r` of a matrix as a vector.
Var row(const Var& m, std::size_t r);
/// Stacks equal-length vectors into a matrix, one per row.
Var stack_rows(const std::vector<Var>& rows);
/// Adds vector `v` to every row of matrix `m`.
Var add_rowwise(const Var& m, const Var& v);
/// Selects rows of `table` by index; gradients scatter-add back.
Var gather_rows(const Var& table, const std::vector<std::size_t>& indices);
/// Mean of equal-shaped tensors.
Var mean(const std::vector<Var>& xs);

}  // namespace gcnsum
