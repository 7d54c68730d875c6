// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "webrouter/cost_model.hpp"
#include "webrouter/scoring.hpp"

namespace webrouter {

/// Lognormal token-count distribution: log(n) ~ N(mu, sigma^2).
struct LogNormal {
  double mu = 0.0;
  double sigma = 0.0;
};

struct ModelArchetype {
  ModelSpec model;
  double capability = 1.0;  // largest difficulty the model solves
  LogNormal prompt_tokens;
  LogNormal completion_tokens;
};

enum class SuccessModel {
  kThreshold,  // success iff difficulty <= capability
  kLogistic,   // success ~ Bernoulli(sigmoid((capability - difficulty) / logistic_scale))
};

/// Generative description of a pool of model archetypes and their queries.
///
/// Each query has a latent difficulty in [0,1]. Its embedding is a fixed random projection
/// of a radial-basis code of the difficulty plus isotropic Gaussian noise. Token counts
/// share a per-query length factor so prompts of one query are similar across models.
struct SyntheticPoolSpec {
  std::vector<ModelArchetype> archetypes;
  std::size_t dimension = 768;
  std::size_t difficulty_bins = 32;
  double noise_sigma = 0.05;
  double shared_length_sigma = 0.5;
  SuccessModel success = SuccessModel::kThreshold;
  double logistic_scale = 0.02;
  /// Seeds the embedding projection. Keep it fixed across train and held-out splits.
  std::uint64_t embedding_seed = 7;

  ModelPool pool() const;

  /// Throws std::invalid_argument unless capabilities are strictly increasing in the
  /// archetypes' median operational cost, along with basic range checks.
  void validate() const;
};

/// The three reference models with capabilities (0.4, 0.8, 0.95) assigned cheapest-first by
/// median per-query cost.
SyntheticPoolSpec reference_synthetic_spec(std::size_t dimension = 768);

/// Median-usage operational cost of an archetype.
double median_cost(const ModelArchetype& archetype);

struct SyntheticDataset {
  std::vector<QueryRecord> records;
  std::vector<double> difficulty;
};

/// Draws `n` records deterministically from `seed`. Query ids are "s<seed>-<index>".
SyntheticDataset generate_synthetic(const SyntheticPoolSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace webrouter
