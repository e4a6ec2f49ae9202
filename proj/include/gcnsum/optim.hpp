// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gcnsum/autodiff.hpp"

namespace gcnsum {

/// Scales all gradients jointly so their global L2 norm is at most
/// `max_norm`. Returns the norm measured before scaling.
double clip_global_norm(std::span<Param* const> params, double max_norm);

/// Adam with bias correction (Kingma & Ba defaults).
class AdamState {
 public:
  explicit AdamState(std::span<Param* const> params, double lr = 1e-3,
                     double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  double lr() const noexcept { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  double beta1() const noexcept { return beta1_; }
  double beta2() const noexcept { return beta2_; }
  double eps() const noexcept { return eps_; }
  std::uint64_t step_count() const noexcept { return t_; }

  const Tensor& first_moment(std::size_t i) const { return m_[i]; }
  const Tensor& second_moment(std::size_t i) const { return v_[i]; }

  /// Updates `params` in place and zeroes their gradients. `params` must be
  /// the same list, in the same order, the state was constructed with.
  void step(std::span<Param* const> params);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
  std::vector<Tensor> m_, v_;
};

inline void adam_step(AdamState& state, std::span<Param* const> params) {
  state.step(params);
}

}  // namespace gcnsum
