// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "webrouter/error.hpp"
#include "webrouter/numeric.hpp"

namespace webrouter {

void TrainConfig::validate() const {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(lambda_cost >= 0.0)) throw std::invalid_argument("lambda_cost must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  if (!(prior_pi > 0.0 && prior_pi < 1.0)) throw std::invalid_argument("prior_pi must be in (0,1)");
  if (!(mask_temperature > 0.0)) throw std::invalid_argument("mask_temperature must be > 0");
  if (!(adamw.beta1 >= 0.0 && adamw.beta1 < 1.0 && adamw.beta2 >= 0.0 && adamw.beta2 < 1.0))
    throw std::invalid_argument("AdamW moment decay rates must be in [0,1)");
  if (!(adamw.epsilon > 0.0) || !(adamw.weight_decay >= 0.0))
    throw std::invalid_argument("AdamW epsilon must be > 0 and weight decay >= 0");
}

RouterInit TrainConfig::router_init() const {
  RouterInit init;
  init.hidden = hidden;
  init.prior_pi = prior_pi;
  init.temperature = mask_temperature;
  init.encoder = encoder;
  init.seed = mix_seed(seed, 1);
  return init;
}

std::vector<double> penalty_unit_costs(const ModelPool& pool, CostUnits units) {
  std::vector<double> costs = pool.unit_costs();
  if (units == CostUnits::kNormalized) {
    const double max_cost = pool.max_unit_cost();
    if (max_cost > 0.0)
      for (double& c : costs) c /= max_cost;
  }
  return costs;
}

namespace {

using Eigen::ArrayXXd;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

LossAndGradient evaluate_batch(const RouterParams& params, std::span<const ScoredRecord* const> batch,
                               const ModelPool& pool, const TrainConfig& config, std::uint64_t rng_seed,
                               bool want_gradient) {
  if (batch.empty()) throw std::invalid_argument("ca-VIB loss needs a non-empty batch");
  const RouterDims dims = params.dims();
  if (dims.models != pool.size())
    throw PoolMismatch("router has " + std::to_string(dims.models) + " outputs but the pool has " +
                       std::to_string(pool.size()) + " models");

  const Index B = static_cast<Index>(batch.size());
  const Index d = static_cast<Index>(dims.input);
  const Index h = static_cast<Index>(dims.hidden);
  const Index T = static_cast<Index>(dims.models);

  MatrixXd X(d, B);
  MatrixXd Y(T, B);
  MatrixXd noise(h, B);
  for (Index i = 0; i < B; ++i) {
    const ScoredRecord& r = *batch[static_cast<std::size_t>(i)];
    if (static_cast<Index>(r.record.embedding.size()) != d)
      throw DimensionMismatch(dims.input, r.record.embedding.size(), "record '" + r.record.query_id + "' embedding");
    if (static_cast<Index>(r.score.target.size()) != T)
      throw DimensionMismatch(dims.models, r.score.target.size(), "record '" + r.record.query_id + "' target");
    X.col(i) = Eigen::Map<const VectorXd>(r.record.embedding.data(), d);
    Y.col(i) = Eigen::Map<const VectorXd>(r.score.target.data(), T);
    noise.col(i) = logistic_noise(dims.hidden, mix_seed(rng_seed, static_cast<std::uint64_t>(i)));
  }
  const std::vector<double> unit = penalty_unit_costs(pool, config.cost_units);
  const VectorXd costs = Eigen::Map<const VectorXd>(unit.data(), T);

  // Forward.
  MatrixXd F;
  if (params.encoder == EncoderKind::kIdentity) {
    F = X;
  } else {
    F = ((params.encoder_weight * X).colwise() + params.encoder_bias).array().tanh().matrix();
  }
  const MatrixXd mask_logits = (params.mask_weight * F).colwise() + params.mask_bias;
  ArrayXXd P(h, B);
  ArrayXXd active(h, B);
  for (Index j = 0; j < mask_logits.size(); ++j) {
    const double s = sigmoid(mask_logits(j));
    const bool inside = s >= kMinMaskRate && s <= 1.0 - kMinMaskRate;
    P(j) = inside ? s : std::clamp(s, kMinMaskRate, 1.0 - kMinMaskRate);
    active(j) = inside ? 1.0 : 0.0;
  }
  const ArrayXXd rate_logit = P.log() - (-P).log1p();
  const double tau = params.temperature;
  const ArrayXXd S = ((rate_logit + noise.array()) / tau).unaryExpr([](double g) { return sigmoid(g); });
  const MatrixXd Z = (S * F.array()).matrix();
  const MatrixXd O = (params.decoder_weight * Z).colwise() + params.decoder_bias;

  MatrixXd Q(T, B);
  VectorXd ce(B), expected_cost(B), kl(B);
  const double log_pi = std::log(params.prior_pi);
  const double log_1m_pi = std::log1p(-params.prior_pi);
  for (Index i = 0; i < B; ++i) {
    const double m = O.col(i).maxCoeff();
    const double lse = m + std::log((O.col(i).array() - m).exp().sum());
    const VectorXd log_q = O.col(i).array() - lse;
    Q.col(i) = log_q.array().exp().matrix();
    ce[i] = -Y.col(i).dot(log_q);
    expected_cost[i] = Q.col(i).dot(costs);
    const auto p = P.col(i);
    kl[i] = (p * (p.log() - log_pi) + (1.0 - p) * ((-p).log1p() - log_1m_pi)).sum();
  }

  LossAndGradient out;
  LossBreakdown& loss = out.loss;
  loss.prediction = ce.mean();
  loss.compression = config.beta * kl.mean();
  loss.cost = config.lambda_cost * expected_cost.mean();
  loss.total = loss.prediction + loss.compression + loss.cost;
  loss.mean_mask_rate = P.mean();
  if (!want_gradient) return out;

  // Backward, averaged over the batch.
  const double inv_b = 1.0 / static_cast<double>(B);
  MatrixXd dO(T, B);
  for (Index i = 0; i < B; ++i) {
    const VectorXd q = Q.col(i);
    const double target_mass = Y.col(i).sum();
    dO.col(i) = (q * target_mass - Y.col(i)) +
                config.lambda_cost * q.cwiseProduct((costs.array() - expected_cost[i]).matrix());
  }
  dO *= inv_b;

  RouterGradients& g = out.grads;
  g = RouterWeights::zeros_like(params);
  g.decoder_weight.noalias() = dO * Z.transpose();
  g.decoder_bias = dO.rowwise().sum();

  const ArrayXXd dZ = (params.decoder_weight.transpose() * dO).array();
  ArrayXXd dF = dZ * S;
  const ArrayXXd dRateLogit = dZ * F.array() * S * (1.0 - S) / tau;
  const ArrayXXd kl_logit = (config.beta * inv_b) * P * (1.0 - P) * (rate_logit - (log_pi - log_1m_pi));
  const MatrixXd dMaskLogits = (active * (dRateLogit + kl_logit)).matrix();

  g.mask_weight.noalias() = dMaskLogits * F.transpose();
  g.mask_bias = dMaskLogits.rowwise().sum();
  if (params.encoder == EncoderKind::kTanh) {
    dF += (params.mask_weight.transpose() * dMaskLogits).array();
    const MatrixXd dPre = (dF * (1.0 - F.array().square())).matrix();
    g.encoder_weight.noalias() = dPre * X.transpose();
    g.encoder_bias = dPre.rowwise().sum();
  }
  return out;
}

std::vector<const ScoredRecord*> gather(std::span<const ScoredRecord> batch) {
  std::vector<const ScoredRecord*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& r : batch) ptrs.push_back(&r);
  return ptrs;
}

bool finite(const LossBreakdown& l) {
  return std::isfinite(l.total) && std::isfinite(l.prediction) && std::isfinite(l.compression) &&
         std::isfinite(l.cost);
}

}  // namespace

LossBreakdown ca_vib_loss(const RouterParams& params, std::span<const ScoredRecord> batch,
                          const ModelPool& pool, const TrainConfig& config, std::uint64_t rng_seed) {
  const auto ptrs = gather(batch);
  return evaluate_batch(params, ptrs, pool, config, rng_seed, false).loss;
}

LossAndGradient loss_gradient(const RouterParams& params, std::span<const ScoredRecord> batch,
                              const ModelPool& pool, const TrainConfig& config, std::uint64_t rng_seed) {
  const auto ptrs = gather(batch);
  return evaluate_batch(params, ptrs, pool, config, rng_seed, true);
}

LossAndGradient loss_gradient(const RouterParams& params, std::span<const ScoredRecord* const> batch,
                              const ModelPool& pool, const TrainConfig& config, std::uint64_t rng_seed) {
  return evaluate_batch(params, batch, pool, config, rng_seed, true);
}

TrainResult train(std::span<const ScoredRecord> data, const ModelPool& pool, const TrainConfig& config,
                  const StepCallback& on_step) {
  config.validate();
  if (data.empty()) throw std::invalid_argument("train: dataset is empty");
  const std::size_t d = data.front().record.embedding.size();
  return train_from(init_router(d, pool.size(), config.router_init()), data, pool, config, on_step);
}

TrainResult train_from(RouterParams initial, std::span<const ScoredRecord> data, const ModelPool& pool,
                       const TrainConfig& config, const StepCallback& on_step) {
  config.validate();
  initial.validate();
  if (data.empty()) throw std::invalid_argument("train: dataset is empty");

  TrainResult result;
  result.params = std::move(initial);
  result.log.reserve(config.steps);
  AdamWState state = init_adamw_state(result.params);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 shuffle_rng(mix_seed(config.seed, 2));
  std::size_t cursor = order.size();
  const std::uint64_t noise_root = mix_seed(config.seed, 3);
  const std::size_t batch_size = std::min(config.batch_size, data.size());

  std::vector<const ScoredRecord*> batch(batch_size);
  for (std::size_t step = 1; step <= config.steps; ++step) {
    for (auto& slot : batch) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        cursor = 0;
      }
      slot = &data[order[cursor++]];
    }
    LossAndGradient lg = loss_gradient(result.params, batch, pool, config, mix_seed(noise_root, step));
    if (!finite(lg.loss)) throw NonFiniteError(step, "loss");
    optimizer_step(result.params, lg.grads, state, config.learning_rate, config.adamw);
    result.log.push_back({step, lg.loss});
    if (on_step) on_step(step, result.params);
  }
  return result;
}

void write_log_csv(std::ostream& out, std::span<const TrainLogRow> log) {
  out << "step,total,prediction,compression,cost,mean_mask_rate\n";
  char buf[256];
  for (const auto& row : log) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.step, row.loss.total,
                  row.loss.prediction, row.loss.compression, row.loss.cost, row.loss.mean_mask_rate);
    out << buf;
  }
}

}  // namespace webrouter
