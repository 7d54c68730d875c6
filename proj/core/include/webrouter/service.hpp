// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "webrouter/checkpoint.hpp"
#include "webrouter/cost_model.hpp"
#include "webrouter/embedding.hpp"
#include "webrouter/router.hpp"

namespace webrouter {

struct ServiceResponse {
  int status = 200;
  std::string body;  // application/json
};

/// Transport-independent request handling for the routing service. Holds the loaded router
/// read-only; handle_* may be called concurrently.
class RouteService {
 public:
  /// Verifies the checkpoint against `pool`. `text_embedder` serves {"text": ...} requests and
  /// must match the checkpoint's input dimension; it may be null to accept embeddings only.
  RouteService(Checkpoint checkpoint, ModelPool pool, std::unique_ptr<EmbeddingProvider> text_embedder);

  /// GET /health: status, T, model_ids and the pool fingerprint.
  ServiceResponse handle_health() const;

  /// POST /route with {"text": str} or {"embedding": [float; d]}.
  /// 200 {"model_id", "probs", "expected_unit_cost"}; 400 for malformed bodies;
  /// 422 for a wrong embedding dimension.
  ServiceResponse handle_route(std::string_view body) const;

  /// Routing decision for a raw embedding, applying the checkpoint's input normalization.
  RoutingDecision route_embedding(std::span<const double> embedding) const;

  const ModelPool& pool() const noexcept { return pool_; }
  const Checkpoint& checkpoint() const noexcept { return checkpoint_; }
  std::uint64_t requests_served() const noexcept { return requests_.load(std::memory_order_relaxed); }

 private:
  Checkpoint checkpoint_;
  ModelPool pool_;
  std::unique_ptr<EmbeddingProvider> text_embedder_;
  mutable std::atomic<std::uint64_t> requests_{0};
};

/// JSON rendering of a decision: {"model_id", "chosen", "probs", "expected_unit_cost", "mask_rate"}.
std::string decision_to_json(const RoutingDecision& decision, const ModelPool& pool);

}  // namespace webrouter
