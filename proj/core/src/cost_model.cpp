// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "webrouter/numeric.hpp"

namespace webrouter {

ModelSpec ModelSpec::per_million(std::string model_id, double prompt_per_million,
                                 double completion_per_million) {
  return ModelSpec{std::move(model_id), prompt_per_million * 1e-6, completion_per_million * 1e-6};
}

ModelPool::ModelPool(std::vector<ModelSpec> models) : models_(std::move(models)) {
  if (models_.size() < 2) throw std::invalid_argument("model pool needs at least two models");
  std::unordered_set<std::string> seen;
  for (const auto& m : models_) {
    if (m.model_id.empty()) throw std::invalid_argument("model_id must be non-empty");
    if (!seen.insert(m.model_id).second)
      throw std::invalid_argument("duplicate model_id '" + m.model_id + "' in pool");
    if (!(m.prompt_price >= 0.0) || !(m.completion_price >= 0.0) ||
        !std::isfinite(m.prompt_price) || !std::isfinite(m.completion_price))
      throw std::invalid_argument("model '" + m.model_id + "' has a negative or non-finite price");
  }
}

std::vector<std::string> ModelPool::model_ids() const {
  std::vector<std::string> ids;
  ids.reserve(models_.size());
  for (const auto& m : models_) ids.push_back(m.model_id);
  return ids;
}

std::vector<double> ModelPool::unit_costs() const {
  std::vector<double> out;
  out.reserve(models_.size());
  for (const auto& m : models_) out.push_back(unit_cost(m));
  return out;
}

double ModelPool::max_unit_cost() const {
  const auto costs = unit_costs();
  return *std::max_element(costs.begin(), costs.end());
}

std::size_t ModelPool::index_of(const std::string& model_id) const {
  for (std::size_t t = 0; t < models_.size(); ++t)
    if (models_[t].model_id == model_id) return t;
  return models_.size();
}

std::string ModelPool::fingerprint() const {
  std::uint64_t h = fnv1a("webrouter-pool");
  char buf[64];
  for (const auto& m : models_) {
    h = fnv1a(m.model_id, h);
    std::snprintf(buf, sizeof(buf), "|%.17g|%.17g;", m.prompt_price, m.completion_price);
    h = fnv1a(buf, h);
  }
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double operational_cost(const UsageCounts& usage, const ModelSpec& model) {
  return static_cast<double>(usage.prompt_tokens) * model.prompt_price +
         static_cast<double>(usage.completion_tokens) * model.completion_price;
}

double unit_cost(const ModelSpec& model) { return model.prompt_price + model.completion_price; }

std::vector<double> cost_scores(std::span<const double> costs, const CostScaling& scaling) {
  if (costs.empty()) throw std::invalid_argument("cost_scores: empty cost vector (malformed record)");
  for (double c : costs)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("cost_scores: costs must be finite and non-negative");

  double kappa = scaling.fixed_scale;
  if (scaling.mode == CostScaling::Mode::kPerQueryMean) {
    kappa = std::accumulate(costs.begin(), costs.end(), 0.0) / static_cast<double>(costs.size());
  } else if (!(kappa > 0.0)) {
    throw std::invalid_argument("cost_scores: fixed scale must be positive");
  }

  std::vector<double> utility(costs.size());
  if (kappa > 0.0) {
    for (std::size_t t = 0; t < costs.size(); ++t) utility[t] = std::exp(-costs[t] / kappa);
  } else {
    // Only reachable with per-query mean scaling when every cost is zero.
    std::fill(utility.begin(), utility.end(), 1.0);
  }

  const auto [lo, hi] = std::minmax_element(utility.begin(), utility.end());
  const double min_u = *lo;
  const double range = *hi - min_u;
  if (range == 0.0) return std::vector<double>(costs.size(), 1.0);
  for (double& u : utility) u = (u - min_u) / range;
  return utility;
}

ModelPool reference_pool() {
  return ModelPool({
      ModelSpec::per_million("gemini-2.5-flash", 0.30, 2.50),
      ModelSpec::per_million("gpt-4.1-mini", 0.40, 1.60),
      ModelSpec::per_million("gpt-4o", 5.00, 15.00),
  });
}

}  // namespace webrouter
