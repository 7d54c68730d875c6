// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/service.hpp"

#include <cmath>
#include <vector>

#include <json.hpp>

#include "webrouter/error.hpp"
#include "webrouter/numeric.hpp"

namespace webrouter {

using nlohmann::json;

namespace {

ServiceResponse error_response(int status, const std::string& field, const std::string& message) {
  return {status, json{{"error", message}, {"field", field}}.dump()};
}

}  // namespace

RouteService::RouteService(Checkpoint checkpoint, ModelPool pool, std::unique_ptr<EmbeddingProvider> text_embedder)
    : checkpoint_(std::move(checkpoint)), pool_(std::move(pool)), text_embedder_(std::move(text_embedder)) {
  verify_pool(checkpoint_, pool_);
  checkpoint_.params.validate();
  const std::size_t d = checkpoint_.params.dims().input;
  if (text_embedder_ && text_embedder_->dimension() != d)
    throw DimensionMismatch(d, text_embedder_->dimension(), "text embedding provider");
}

RoutingDecision RouteService::route_embedding(std::span<const double> embedding) const {
  const std::size_t d = checkpoint_.params.dims().input;
  if (embedding.size() != d) throw DimensionMismatch(d, embedding.size(), "embedding");
  std::vector<double> x(embedding.begin(), embedding.end());
  if (checkpoint_.normalize_inputs) l2_normalize(x);
  return forward_infer(checkpoint_.params, x, pool_);
}

ServiceResponse RouteService::handle_health() const {
  json body;
  body["status"] = "ok";
  body["T"] = pool_.size();
  body["model_ids"] = pool_.model_ids();
  body["pool_fingerprint"] = pool_.fingerprint();
  body["input_dimension"] = checkpoint_.params.dims().input;
  body["requests_served"] = requests_served();
  return {200, body.dump()};
}

ServiceResponse RouteService::handle_route(std::string_view body) const {
  requests_.fetch_add(1, std::memory_order_relaxed);
  json doc = json::parse(body.begin(), body.end(), nullptr, false);
  if (doc.is_discarded()) return error_response(400, "<body>", "request body is not valid JSON");
  if (!doc.is_object()) return error_response(400, "<body>", "request body must be a JSON object");

  const bool has_text = doc.contains("text");
  const bool has_embedding = doc.contains("embedding");
  if (has_text == has_embedding)
    return error_response(400, "text|embedding", "provide exactly one of 'text' or 'embedding'");

  std::vector<double> embedding;
  if (has_embedding) {
    const json& arr = doc.at("embedding");
    if (!arr.is_array()) return error_response(400, "embedding", "expected an array of numbers");
    embedding.reserve(arr.size());
    for (const auto& v : arr) {
      if (!v.is_number()) return error_response(400, "embedding", "expected an array of numbers");
      embedding.push_back(v.get<double>());
    }
    if (!all_finite(embedding)) return error_response(400, "embedding", "non-finite value");
  } else {
    const json& text = doc.at("text");
    if (!text.is_string() || text.get_ref<const std::string&>().empty())
      return error_response(400, "text", "expected a non-empty string");
    if (!text_embedder_) return error_response(400, "text", "this service has no text embedding provider");
    embedding = text_embedder_->embed(text.get_ref<const std::string&>());
  }

  try {
    const RoutingDecision decision = route_embedding(embedding);
    json out;
    out["model_id"] = pool_[decision.chosen].model_id;
    out["probs"] = decision.probs;
    out["expected_unit_cost"] = decision.expected_unit_cost;
    return {200, out.dump()};
  } catch (const DimensionMismatch& e) {
    return error_response(422, "embedding", e.what());
  }
}

std::string decision_to_json(const RoutingDecision& decision, const ModelPool& pool) {
  json out;
  out["model_id"] = pool[decision.chosen].model_id;
  out["chosen"] = decision.chosen;
  out["probs"] = decision.probs;
  out["expected_unit_cost"] = decision.expected_unit_cost;
  out["mask_rate"] = decision.mask_rate;
  return out.dump();
}

}  // namespace webrouter
