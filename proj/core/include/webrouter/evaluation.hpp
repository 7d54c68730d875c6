// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "webrouter/cost_model.hpp"
#include "webrouter/router.hpp"
#include "webrouter/scoring.hpp"

namespace webrouter {

struct PolicyDecision {
  std::size_t model = 0;
  double expected_unit_cost = 0.0;  // USD per token under the policy's distribution
};

/// Maps a record to a model. Only the oracle looks beyond the embedding.
using Policy = std::function<PolicyDecision(const QueryRecord&)>;

struct NamedPolicy {
  std::string name;
  Policy policy;
};

/// Cheapest model (by this record's operational cost) that succeeded; when none did, the
/// cheapest model overall. Ties go to the lower index.
std::size_t oracle_choice(const QueryRecord& record, const ModelPool& pool);

/// always-<model_id> for every model, "random" (seeded, a pure function of seed and
/// query_id) and "oracle".
std::vector<NamedPolicy> baselines(const ModelPool& pool, std::uint64_t seed);

/// The returned policy holds a reference to `params`, which must outlive it.
NamedPolicy router_policy(const RouterParams& params, const ModelPool& pool, std::string name = "router",
                          InferenceMask mode = InferenceMask::kExpected);

struct EvalRow {
  std::string policy;
  std::size_t queries = 0;
  double accuracy = 0.0;                 // fraction routed to a model that succeeded
  double mean_price = 0.0;               // USD, operational cost of the chosen model
  double mean_expected_unit_cost = 0.0;  // USD per token
};

struct EvalReport {
  std::vector<EvalRow> rows;

  const EvalRow& row(const std::string& policy) const;
};

/// Runs `policy` over the records in order and aggregates sequentially.
EvalRow evaluate(const NamedPolicy& policy, std::span<const QueryRecord> records, const ModelPool& pool);

EvalReport evaluate_all(std::span<const NamedPolicy> policies, std::span<const QueryRecord> records,
                        const ModelPool& pool);

void write_report_csv(std::ostream& out, const EvalReport& report);
void write_report_table(std::ostream& out, const EvalReport& report);

/// Mean cosine similarity between a query's inference latent and each decoder row, grouped
/// by the query's oracle model. mean[r][c]: queries whose best model is r, affinity to c.
/// Queries no model solved have no best model and are skipped.
struct AffinityMatrix {
  std::vector<std::string> model_ids;
  std::vector<std::vector<double>> mean;
  std::vector<std::size_t> counts;  // queries per row
};

AffinityMatrix affinity_matrix(const RouterParams& params, std::span<const QueryRecord> records,
                               const ModelPool& pool);

void write_affinity_csv(std::ostream& out, const AffinityMatrix& matrix);

}  // namespace webrouter
