// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace webrouter {

/// A candidate model and its per-token prices in USD.
struct ModelSpec {
  std::string model_id;
  double prompt_price = 0.0;
  double completion_price = 0.0;

  /// Builds a spec from prices quoted per million tokens.
  static ModelSpec per_million(std::string model_id, double prompt_per_million,
                               double completion_per_million);
};

/// Token usage of one model call.
struct UsageCounts {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

/// Ordered set of candidate models. The order indexes every score vector, target and
/// router output, so it must be identical between training and serving.
class ModelPool {
 public:
  /// Throws std::invalid_argument on fewer than two models, a negative price or a
  /// duplicated model_id.
  explicit ModelPool(std::vector<ModelSpec> models);

  std::size_t size() const noexcept { return models_.size(); }
  const ModelSpec& operator[](std::size_t t) const { return models_[t]; }
  const std::vector<ModelSpec>& models() const noexcept { return models_; }

  std::vector<std::string> model_ids() const;
  std::vector<double> unit_costs() const;
  double max_unit_cost() const;

  /// Index of `model_id`, or size() when absent.
  std::size_t index_of(const std::string& model_id) const;

  /// Stable hash over ids and prices, rendered as 16 hex digits.
  std::string fingerprint() const;

 private:
  std::vector<ModelSpec> models_;
};

/// n_p * c_p + n_c * c_c in USD.
double operational_cost(const UsageCounts& usage, const ModelSpec& model);

/// Query-agnostic price of one prompt token plus one completion token.
double unit_cost(const ModelSpec& model);

/// How raw costs are scaled before the exponential utility.
struct CostScaling {
  enum class Mode { kPerQueryMean, kFixed };
  Mode mode = Mode::kPerQueryMean;
  /// Used when mode == kFixed. Must be positive.
  double fixed_scale = 1.0;
};

/// Min-max normalized exponential utilities exp(-c / kappa) over one query's costs.
/// The cheapest model scores 1 and the most expensive 0; equal costs score 1 everywhere.
/// Throws std::invalid_argument on an empty vector or a negative cost.
std::vector<double> cost_scores(std::span<const double> costs, const CostScaling& scaling = {});

/// Gemini-2.5-Flash, GPT-4.1-mini and GPT-4o at their OpenRouter list prices.
ModelPool reference_pool();

/// Reads a pool config: JSON array of
/// {"model_id", "prompt_price_per_million", "completion_price_per_million"}.
ModelPool load_pool(const std::filesystem::path& path);
ModelPool parse_pool(const std::string& json_text);
std::string serialize_pool(const ModelPool& pool);

}  // namespace webrouter
