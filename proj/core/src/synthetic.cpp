// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "webrouter/numeric.hpp"

namespace webrouter {

ModelPool SyntheticPoolSpec::pool() const {
  std::vector<ModelSpec> models;
  for (const auto& a : archetypes) models.push_back(a.model);
  return ModelPool(std::move(models));
}

double median_cost(const ModelArchetype& a) {
  return std::exp(a.prompt_tokens.mu) * a.model.prompt_price +
         std::exp(a.completion_tokens.mu) * a.model.completion_price;
}

void SyntheticPoolSpec::validate() const {
  (void)pool();
  if (dimension == 0 || difficulty_bins == 0) throw std::invalid_argument("synthetic: dimension and bins must be positive");
  if (!(noise_sigma >= 0.0) || !(shared_length_sigma >= 0.0)) throw std::invalid_argument("synthetic: negative sigma");
  if (success == SuccessModel::kLogistic && !(logistic_scale > 0.0))
    throw std::invalid_argument("synthetic: logistic_scale must be positive");
  for (std::size_t a = 0; a < archetypes.size(); ++a) {
    for (std::size_t b = 0; b < archetypes.size(); ++b) {
      if (median_cost(archetypes[a]) < median_cost(archetypes[b]) &&
          !(archetypes[a].capability < archetypes[b].capability))
        throw std::invalid_argument("synthetic: '" + archetypes[b].model.model_id +
                                    "' costs more than '" + archetypes[a].model.model_id +
                                    "' but is not more capable");
    }
  }
}

SyntheticPoolSpec reference_synthetic_spec(std::size_t dimension) {
  SyntheticPoolSpec spec;
  spec.dimension = dimension;
  spec.difficulty_bins = std::min<std::size_t>(32, dimension);
  const ModelPool pool = reference_pool();
  // Prompt-dominated usage: the prompt share of price exceeds 70% for every model.
  spec.archetypes = {
      {pool[0], 0.40, {std::log(2400.0), 0.08}, {std::log(100.0), 0.08}},
      {pool[1], 0.80, {std::log(3600.0), 0.08}, {std::log(160.0), 0.08}},
      {pool[2], 0.95, {std::log(2600.0), 0.08}, {std::log(110.0), 0.08}},
  };
  return spec;
}

SyntheticDataset generate_synthetic(const SyntheticPoolSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  const auto d = static_cast<Eigen::Index>(spec.dimension);
  const auto K = static_cast<Eigen::Index>(spec.difficulty_bins);

  std::mt19937_64 projection_rng(mix_seed(spec.embedding_seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd projection(d, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) projection(i, k) = normal(projection_rng);
    projection.col(k).normalize();
  }
  const double width = 1.0 / static_cast<double>(K);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto draw_tokens = [&](const LogNormal& dist, double shared) {
    const double v = std::exp(dist.mu + shared + dist.sigma * normal(rng));
    return static_cast<std::int64_t>(std::max(1.0, std::round(v)));
  };

  SyntheticDataset out;
  out.records.reserve(n);
  out.difficulty.reserve(n);
  Eigen::VectorXd code(K);
  for (std::size_t q = 0; q < n; ++q) {
    const double difficulty = uniform(rng);
    const double shared_prompt = spec.shared_length_sigma * normal(rng);
    const double shared_completion = spec.shared_length_sigma * normal(rng);

    QueryRecord rec;
    rec.query_id = "s" + std::to_string(seed) + "-" + std::to_string(q);
    for (const auto& a : spec.archetypes) {
      ModelOutcome o;
      o.usage.prompt_tokens = draw_tokens(a.prompt_tokens, shared_prompt);
      o.usage.completion_tokens = draw_tokens(a.completion_tokens, shared_completion);
      if (spec.success == SuccessModel::kThreshold) {
        o.success = difficulty <= a.capability;
      } else {
        o.success = uniform(rng) < sigmoid((a.capability - difficulty) / spec.logistic_scale);
      }
      rec.per_model.push_back(o);
    }

    for (Eigen::Index k = 0; k < K; ++k) {
      const double center = (static_cast<double>(k) + 0.5) * width;
      const double u = (difficulty - center) / width;
      code[k] = std::exp(-0.5 * u * u);
    }
    Eigen::VectorXd e = projection * code;
    for (Eigen::Index i = 0; i < d; ++i) e[i] += spec.noise_sigma * normal(rng);
    rec.embedding.assign(e.data(), e.data() + e.size());

    out.records.push_back(std::move(rec));
    out.difficulty.push_back(difficulty);
  }
  return out;
}

}  // namespace webrouter
