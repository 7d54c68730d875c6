// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "webrouter/scoring.hpp"
#include "webrouter/training.hpp"

namespace webrouter::cli {

struct ScoreOptions {
  std::filesystem::path data;
  std::filesystem::path pool;
  std::filesystem::path out;
  DatasetOptions dataset;
};

struct TrainOptions {
  std::filesystem::path data;
  std::filesystem::path pool;
  std::filesystem::path checkpoint;
  std::filesystem::path log;  // empty: no log file
  std::size_t checkpoint_every = 0;
  DatasetOptions dataset;
  TrainConfig train;
};

struct RouteOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path pool;
  std::optional<std::string> text;
  std::optional<std::string> embedding_json;  // JSON array
  std::optional<std::filesystem::path> embeddings_file;  // with `text` as the query_id
};

struct EvaluateOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path data;
  std::filesystem::path pool;
  std::filesystem::path report_csv;    // empty: skip
  std::filesystem::path affinity_csv;  // empty: skip
  std::uint64_t seed = 0;
  ScoringOptions scoring;
};

struct ServeOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path pool;
  std::string bind = "127.0.0.1:8080";
};

struct SynthOptions {
  std::filesystem::path out;
  std::filesystem::path pool_out;  // empty: skip
  std::size_t n = 5000;
  std::uint64_t seed = 0;
  std::size_t dimension = 768;
  double noise_sigma = 0.05;
  bool logistic = false;
};

// Each command writes human-readable output to `out`, diagnostics to `err`, and returns a
// process exit code.
int cmd_score(const ScoreOptions& options, std::ostream& out, std::ostream& err);
int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);
int cmd_route(const RouteOptions& options, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);
int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);

/// Splits "host:port". Throws std::invalid_argument on a malformed address.
std::pair<std::string, int> parse_bind_address(const std::string& bind);

}  // namespace webrouter::cli
