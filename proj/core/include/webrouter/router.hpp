// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "webrouter/cost_model.hpp"

namespace webrouter {

/// Mask rates are clamped to [kMinMaskRate, 1 - kMinMaskRate] so the KL stays finite.
inline constexpr double kMinMaskRate = 1e-6;

enum class EncoderKind {
  /// features = tanh(W_e x + b_e)
  kTanh,
  /// features = x; requires hidden == input and leaves the encoder blocks empty.
  kIdentity,
};

struct RouterDims {
  std::size_t input = 0;   // d
  std::size_t hidden = 0;  // h
  std::size_t models = 0;  // T
};

/// Learnable tensors of the router. Also used as the gradient container.
struct RouterWeights {
  Eigen::MatrixXd encoder_weight;  // h x d
  Eigen::VectorXd encoder_bias;    // h
  Eigen::MatrixXd mask_weight;     // h x h
  Eigen::VectorXd mask_bias;       // h
  Eigen::MatrixXd decoder_weight;  // T x h
  Eigen::VectorXd decoder_bias;    // T

  static constexpr std::array<std::string_view, 6> kBlockNames = {
      "encoder_weight", "encoder_bias", "mask_weight", "mask_bias", "decoder_weight", "decoder_bias"};

  /// Contiguous storage of each block, in kBlockNames order. Matrices are column-major.
  std::array<std::span<double>, 6> blocks();
  std::array<std::span<const double>, 6> blocks() const;

  std::size_t parameter_count() const;

  /// Zero-filled tensors shaped like `like`.
  static RouterWeights zeros_like(const RouterWeights& like);
};

using RouterGradients = RouterWeights;

struct RouterParams : RouterWeights {
  double prior_pi = 0.5;     // Bernoulli rate of the mask prior r(m)
  double temperature = 0.5;  // relaxed-Bernoulli temperature used in training
  EncoderKind encoder = EncoderKind::kTanh;

  RouterDims dims() const;

  /// Throws std::invalid_argument on inconsistent shapes, non-finite weights,
  /// prior_pi outside (0,1) or a non-positive temperature.
  void validate() const;
};

struct RouterInit {
  std::size_t hidden = 0;  // 0 means hidden = input
  double prior_pi = 0.5;
  double temperature = 0.5;
  EncoderKind encoder = EncoderKind::kTanh;
  std::uint64_t seed = 0;
};

/// Glorot-uniform weights, zero biases.
RouterParams init_router(std::size_t input_dim, std::size_t models, const RouterInit& init = {});

/// Per-feature Bernoulli rates of the mask, already clamped.
struct MaskDistribution {
  Eigen::VectorXd probs;

  double mean_rate() const { return probs.size() ? probs.mean() : 0.0; }
};

struct Encoding {
  Eigen::VectorXd features;
  MaskDistribution mask;
};

/// features = nonlinearity(W_e x + b_e), mask rates = clamp(sigmoid(W_m features + b_m)).
/// Throws DimensionMismatch when `embedding` has the wrong length.
Encoding encode(const RouterParams& params, std::span<const double> embedding);

/// Logistic noise log(u) - log(1 - u), u ~ U(0,1), reproducible from `seed`.
Eigen::VectorXd logistic_noise(std::size_t n, std::uint64_t seed);

/// Relaxed-Bernoulli sample sigmoid((logit(p) + noise) / temperature).
Eigen::VectorXd sample_mask(const MaskDistribution& mask, double temperature, std::uint64_t seed);

/// softmax(W_d z + b_d).
Eigen::VectorXd decode(const RouterParams& params, const Eigen::VectorXd& latent);

struct TrainForward {
  Eigen::VectorXd probs;
  MaskDistribution mask;
  Eigen::VectorXd latent;  // z = sampled mask * features
};

/// Single-sample stochastic forward pass used by the training objective.
TrainForward forward_train(const RouterParams& params, std::span<const double> embedding,
                           std::uint64_t seed);

enum class InferenceMask {
  kExpected,   // m = p
  kThreshold,  // m = 1[p > 0.5]
};

struct RoutingDecision {
  std::vector<double> probs;
  std::size_t chosen = 0;
  double expected_unit_cost = 0.0;  // USD per token
  double mask_rate = 0.0;
};

/// Deterministic latent used at inference time.
Eigen::VectorXd inference_latent(const RouterParams& params, std::span<const double> embedding,
                                 InferenceMask mode = InferenceMask::kExpected);

/// Deterministic routing decision. Throws PoolMismatch when the pool size differs from the
/// decoder's output count.
RoutingDecision forward_infer(const RouterParams& params, std::span<const double> embedding,
                              const ModelPool& pool, InferenceMask mode = InferenceMask::kExpected);

/// Argmax of `probs`; entries within 1e-12 of the maximum tie, and ties go to the lower
/// unit cost, then the lower index.
std::size_t choose_model(std::span<const double> probs, const ModelPool& pool);

/// KL(Bernoulli(p) || Bernoulli(prior)) summed over features, in nats.
double mask_kl(const MaskDistribution& mask, double prior_pi);

}  // namespace webrouter
