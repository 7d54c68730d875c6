// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "webrouter/error.hpp"
#include "webrouter/numeric.hpp"

namespace webrouter {

void adamw_update(std::span<double> params, std::span<const double> grads, std::span<double> first_moment,
                  std::span<double> second_moment, std::int64_t step, double learning_rate,
                  const AdamWConfig& config) {
  if (grads.size() != params.size() || first_moment.size() != params.size() ||
      second_moment.size() != params.size())
    throw std::invalid_argument("adamw_update: buffer size mismatch");
  if (step < 1) throw std::invalid_argument("adamw_update: step is 1-based");

  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
  const double decay = 1.0 - learning_rate * config.weight_decay;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    first_moment[i] = config.beta1 * first_moment[i] + (1.0 - config.beta1) * g;
    second_moment[i] = config.beta2 * second_moment[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = first_moment[i] / bias1;
    const double v_hat = second_moment[i] / bias2;
    params[i] = params[i] * decay - learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

AdamWState init_adamw_state(const RouterWeights& like) {
  AdamWState state;
  for (auto block : like.blocks()) {
    state.first_moment.emplace_back(block.size(), 0.0);
    state.second_moment.emplace_back(block.size(), 0.0);
  }
  return state;
}

void optimizer_step(RouterParams& params, const RouterGradients& grads, AdamWState& state,
                    double learning_rate, const AdamWConfig& config) {
  auto param_blocks = params.blocks();
  const auto grad_blocks = grads.blocks();
  if (state.first_moment.size() != param_blocks.size())
    throw std::invalid_argument("optimizer_step: state does not match parameters");
  for (std::size_t b = 0; b < grad_blocks.size(); ++b) {
    if (grad_blocks[b].size() != param_blocks[b].size())
      throw std::invalid_argument("optimizer_step: gradient shape mismatch in " +
                                  std::string(RouterWeights::kBlockNames[b]));
    if (!all_finite(grad_blocks[b]))
      throw NonFiniteError(static_cast<std::size_t>(state.step + 1),
                           "gradient in " + std::string(RouterWeights::kBlockNames[b]));
  }
  ++state.step;
  for (std::size_t b = 0; b < param_blocks.size(); ++b) {
    adamw_update(param_blocks[b], grad_blocks[b], state.first_moment[b], state.second_moment[b], state.step,
                 learning_rate, config);
  }
}

}  // namespace webrouter
