// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "webrouter/cost_model.hpp"

namespace webrouter {

struct ModelOutcome {
  bool success = false;
  UsageCounts usage;
};

/// One executed query: its embedding plus, for every pool model, whether it succeeded and
/// how many tokens it used.
struct QueryRecord {
  std::string query_id;
  std::vector<double> embedding;
  std::vector<ModelOutcome> per_model;
};

/// Supervision for one record: gated cost scores and the softmax target built from them.
struct ScoreVector {
  std::vector<double> scores;
  std::vector<double> target;
};

struct ScoredRecord {
  QueryRecord record;
  ScoreVector score;
};

/// Which models take part in the per-query min-max normalization.
enum class NormalizationScope {
  /// Only models that succeeded on the query. The cheapest successful model scores 1.
  kSucceededModels,
  /// Every model in the pool; the priciest model always scores 0, even when it is the only
  /// one that succeeded.
  kAllModels,
};

enum class NoSignalPolicy { kDrop, kUniformTarget };

struct ScoringOptions {
  CostScaling scaling;
  NormalizationScope scope = NormalizationScope::kSucceededModels;
  double temperature = 1.0;
  NoSignalPolicy no_signal = NoSignalPolicy::kDrop;
};

/// Success-gated cost scores and their softmax target.
///
/// Throws NoSignalRecord when every model failed and the policy is kDrop; with
/// kUniformTarget such a record gets zero scores and a uniform target.
ScoreVector build_scores(const QueryRecord& record, const ModelPool& pool,
                         const ScoringOptions& options = {});

struct DatasetOptions {
  std::size_t dimension = 768;
  bool normalize_embeddings = true;
  ScoringOptions scoring;
};

struct Dataset {
  std::vector<ScoredRecord> records;
  std::size_t dropped = 0;
  std::vector<std::string> warnings;

  std::vector<QueryRecord> query_records() const;
};

/// Parses JSON-lines records, validates them against `pool` and the configured dimension,
/// and attaches score vectors. Blank lines are skipped.
///
/// Throws ParseError naming the line and field on schema violations and DimensionMismatch
/// (with the line number in its message) when an embedding has the wrong length.
Dataset parse_dataset(std::istream& in, const ModelPool& pool, const DatasetOptions& options = {});
Dataset load_dataset(const std::filesystem::path& path, const ModelPool& pool,
                     const DatasetOptions& options = {});

/// Scores already-parsed records; all-failure records are dropped or kept per policy.
Dataset score_records(std::vector<QueryRecord> records, const ModelPool& pool,
                      const DatasetOptions& options = {});

/// Writes records in the input JSON-lines format.
void write_records(std::ostream& out, std::span<const QueryRecord> records);

/// Writes records in the input format with "scores" and "target" attached.
void write_scored(std::ostream& out, const Dataset& dataset);

}  // namespace webrouter
