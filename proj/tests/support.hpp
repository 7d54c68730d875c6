// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only helpers: plain-loop reference implementations, a finite-difference gradient check
// and random instance generators. The ref_* functions use no library math.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "webrouter/cost_model.hpp"
#include "webrouter/numeric.hpp"
#include "webrouter/router.hpp"
#include "webrouter/scoring.hpp"
#include "webrouter/training.hpp"

namespace webrouter::testing {

inline std::vector<double> ref_softmax(const std::vector<double>& x) {
  double m = x[0];
  for (double v : x) m = std::max(m, v);
  double sum = 0.0;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sum += (out[i] = std::exp(x[i] - m));
  for (double& v : out) v /= sum;
  return out;
}

inline double ref_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double ref_bernoulli_kl(double p, double pi) {
  return p * std::log(p / pi) + (1.0 - p) * std::log((1.0 - p) / (1.0 - pi));
}

struct RefForward {
  std::vector<double> features;
  std::vector<double> rates;
  std::vector<double> latent;
  std::vector<double> probs;
};

/// Loop-by-loop forward pass. `noise` empty means the expected mask (z = p * f).
inline RefForward ref_forward(const RouterParams& p, const std::vector<double>& x,
                              const std::vector<double>& noise) {
  const auto dims = p.dims();
  RefForward r;
  r.features.assign(dims.hidden, 0.0);
  for (std::size_t j = 0; j < dims.hidden; ++j) {
    if (p.encoder == EncoderKind::kIdentity) {
      r.features[j] = x[j];
      continue;
    }
    double a = p.encoder_bias(static_cast<Eigen::Index>(j));
    for (std::size_t k = 0; k < dims.input; ++k)
      a += p.encoder_weight(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * x[k];
    r.features[j] = std::tanh(a);
  }
  r.rates.assign(dims.hidden, 0.0);
  r.latent.assign(dims.hidden, 0.0);
  for (std::size_t j = 0; j < dims.hidden; ++j) {
    double a = p.mask_bias(static_cast<Eigen::Index>(j));
    for (std::size_t k = 0; k < dims.hidden; ++k)
      a += p.mask_weight(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * r.features[k];
    const double rate = std::clamp(ref_sigmoid(a), 1e-6, 1.0 - 1e-6);
    r.rates[j] = rate;
    const double m =
        noise.empty() ? rate : ref_sigmoid((std::log(rate / (1.0 - rate)) + noise[j]) / p.temperature);
    r.latent[j] = m * r.features[j];
  }
  std::vector<double> logits(dims.models, 0.0);
  for (std::size_t t = 0; t < dims.models; ++t) {
    double a = p.decoder_bias(static_cast<Eigen::Index>(t));
    for (std::size_t j = 0; j < dims.hidden; ++j)
      a += p.decoder_weight(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) * r.latent[j];
    logits[t] = a;
  }
  r.probs = ref_softmax(logits);
  return r;
}

/// Per-record noise follows the loss's seeding contract: record i of a batch uses
/// logistic_noise(h, mix_seed(seed, i)).
inline LossBreakdown ref_loss(const RouterParams& p, const std::vector<ScoredRecord>& batch,
                              const std::vector<double>& penalty_costs, double beta, double lambda,
                              std::uint64_t seed) {
  LossBreakdown out;
  const auto h = p.dims().hidden;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Eigen::VectorXd n = logistic_noise(h, mix_seed(seed, i));
    const std::vector<double> noise(n.data(), n.data() + n.size());
    const RefForward f = ref_forward(p, batch[i].record.embedding, noise);
    for (std::size_t t = 0; t < f.probs.size(); ++t) {
      out.prediction -= batch[i].score.target[t] * std::log(f.probs[t]);
      out.cost += f.probs[t] * penalty_costs[t];
    }
    for (double r : f.rates) out.compression += ref_bernoulli_kl(r, p.prior_pi);
  }
  const double b = static_cast<double>(batch.size());
  out.prediction /= b;
  out.compression *= beta / b;
  out.cost *= lambda / b;
  out.total = out.prediction + out.compression + out.cost;
  return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline ModelPool random_pool(std::mt19937_64& rng, std::size_t T) {
  std::uniform_real_distribution<double> price(0.05, 20.0);
  std::vector<ModelSpec> models;
  for (std::size_t t = 0; t < T; ++t)
    models.push_back(ModelSpec::per_million("m" + std::to_string(t), price(rng), price(rng)));
  return ModelPool(std::move(models));
}

inline QueryRecord random_record(std::mt19937_64& rng, std::size_t d, std::size_t T, const std::string& id) {
  QueryRecord r;
  r.query_id = id;
  r.embedding = random_vector(rng, d, -1.0, 1.0);
  std::uniform_int_distribution<std::int64_t> tokens(0, 5000);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < T; ++t) r.per_model.push_back({coin(rng), {tokens(rng), tokens(rng)}});
  return r;
}

/// Random scored record with a random probability target (not derived from scores).
inline ScoredRecord random_scored(std::mt19937_64& rng, std::size_t d, std::size_t T, const std::string& id) {
  ScoredRecord s;
  s.record = random_record(rng, d, T, id);
  s.score.scores.assign(T, 0.0);
  s.score.target = ref_softmax(random_vector(rng, T, -2.0, 2.0));
  return s;
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t entries = 0;
};

/// Compares the analytic gradient of the total loss with fourth-order central differences of
/// ca_vib_loss.
/// Relative error is |a - n| / max(|a|, |n|, floor); the floor keeps entries whose true value
/// is at the level of the differencing noise from dominating.
inline GradientCheck check_gradient(const RouterParams& params, const std::vector<ScoredRecord>& batch,
                                    const ModelPool& pool, const TrainConfig& config, std::uint64_t seed,
                                    double step = 1e-4, double floor = 1e-6) {
  const LossAndGradient analytic = loss_gradient(params, batch, pool, config, seed);
  const auto grad_blocks = analytic.grads.blocks();
  RouterParams probe = params;
  auto blocks = probe.blocks();
  GradientCheck out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t k = 0; k < blocks[b].size(); ++k) {
      const double saved = blocks[b][k];
      auto at = [&](double offset) {
        blocks[b][k] = saved + offset;
        return ca_vib_loss(probe, batch, pool, config, seed).total;
      };
      const double numeric = (8.0 * (at(step) - at(-step)) - (at(2.0 * step) - at(-2.0 * step))) / (12.0 * step);
      blocks[b][k] = saved;
      const double a = grad_blocks[b][k];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      out.max_relative_error = std::max(out.max_relative_error, std::abs(a - numeric) / denom);
      ++out.entries;
    }
  }
  return out;
}

/// Random router with every weight perturbed, so mask rates and features spread out.
inline RouterParams random_params(std::mt19937_64& rng, std::size_t d, std::size_t h, std::size_t T,
                                  double prior_pi = 0.5) {
  RouterInit init;
  init.hidden = h;
  init.prior_pi = prior_pi;
  init.seed = rng();
  RouterParams p = init_router(d, T, init);
  std::normal_distribution<double> n(0.0, 0.5);
  for (auto block : p.blocks())
    for (double& v : block) v += n(rng);
  return p;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("webrouter_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace webrouter::testing
