// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "webrouter/router.hpp"

namespace webrouter {

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

/// AdamW with decoupled weight decay and bias correction, applied to flat buffers.
///
/// `step` is the 1-based index of this update. Weight decay is applied as
/// p *= (1 - lr * weight_decay) before the adaptive step.
void adamw_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                  std::span<double> second_moment, std::int64_t step, double learning_rate,
                  const AdamWConfig& config);

struct AdamWState {
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  std::int64_t step = 0;
};

AdamWState init_adamw_state(const RouterWeights& like);

/// One AdamW update over every router block. Increments state.step.
/// Throws NonFiniteError (reporting the upcoming step) if any gradient entry is NaN or infinite;
/// parameters are untouched in that case.
void optimizer_step(RouterParams& params, const RouterGradients& grads, AdamWState& state,
                    double learning_rate, const AdamWConfig& config);

}  // namespace webrouter
