// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "webrouter/cost_model.hpp"
#include "webrouter/optimizer.hpp"
#include "webrouter/router.hpp"
#include "webrouter/scoring.hpp"

namespace webrouter {

/// Units of the unit costs inside the expected-cost penalty.
enum class CostUnits {
  /// Divided by the pool's largest unit cost, so the priciest model costs 1.
  kNormalized,
  /// USD per token.
  kRawDollars,
};

struct TrainConfig {
  double beta = 0.3;          // weight of the mask KL
  double lambda_cost = 0.2;   // weight of the expected unit cost
  double learning_rate = 2e-5;
  std::size_t steps = 2000;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  AdamWConfig adamw;
  CostUnits cost_units = CostUnits::kNormalized;

  // Router construction.
  std::size_t hidden = 0;  // 0 means hidden = input dimension
  double prior_pi = 0.5;
  double mask_temperature = 0.5;
  EncoderKind encoder = EncoderKind::kTanh;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  RouterInit router_init() const;
};

struct LossBreakdown {
  double total = 0.0;
  double prediction = 0.0;   // mean cross-entropy against the score targets
  double compression = 0.0;  // beta * mean mask KL
  double cost = 0.0;         // lambda * mean expected unit cost
  double mean_mask_rate = 0.0;
};

struct LossAndGradient {
  LossBreakdown loss;
  RouterGradients grads;
};

/// Unit costs as they enter the penalty term.
std::vector<double> penalty_unit_costs(const ModelPool& pool, CostUnits units);

/// Cost-aware VIB objective on one batch, one relaxed mask sample per record.
/// Record i draws its mask noise from mix_seed(rng_seed, i).
/// Throws std::invalid_argument on an empty batch.
LossBreakdown ca_vib_loss(const RouterParams& params, std::span<const ScoredRecord> batch,
                          const ModelPool& pool, const TrainConfig& config, std::uint64_t rng_seed);

/// Loss and exact reverse-mode gradient under the same noise realization as ca_vib_loss.
LossAndGradient loss_gradient(const RouterParams& params, std::span<const ScoredRecord> batch,
                              const ModelPool& pool, const TrainConfig& config, std::uint64_t rng_seed);

/// Same as above over a gathered batch (no copies of the records).
LossAndGradient loss_gradient(const RouterParams& params, std::span<const ScoredRecord* const> batch,
                              const ModelPool& pool, const TrainConfig& config, std::uint64_t rng_seed);

struct TrainLogRow {
  std::size_t step = 0;  // 1-based; the loss is measured before that step's update
  LossBreakdown loss;
};

struct TrainResult {
  RouterParams params;
  std::vector<TrainLogRow> log;
};

/// Called after every optimizer step with the updated parameters.
using StepCallback = std::function<void(std::size_t step, const RouterParams& params)>;

/// Initializes a router from config and runs config.steps AdamW steps over seeded, shuffled
/// mini-batches. Throws NonFiniteError naming the step if the loss or a gradient diverges.
TrainResult train(std::span<const ScoredRecord> data, const ModelPool& pool, const TrainConfig& config,
                  const StepCallback& on_step = {});

/// As train(), starting from given parameters.
TrainResult train_from(RouterParams initial, std::span<const ScoredRecord> data, const ModelPool& pool,
                       const TrainConfig& config, const StepCallback& on_step = {});

/// CSV with header step,total,prediction,compression,cost,mean_mask_rate.
void write_log_csv(std::ostream& out, std::span<const TrainLogRow> log);

}  // namespace webrouter
