// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "webrouter/error.hpp"
#include "webrouter/numeric.hpp"

namespace webrouter {

using nlohmann::json;

ScoreVector build_scores(const QueryRecord& record, const ModelPool& pool,
                         const ScoringOptions& options) {
  const std::size_t T = pool.size();
  if (record.per_model.size() != T)
    throw DimensionMismatch(T, record.per_model.size(),
                            "record '" + record.query_id + "' model outcomes");

  ScoreVector out;
  out.scores.assign(T, 0.0);

  std::vector<std::size_t> scored;
  for (std::size_t t = 0; t < T; ++t) {
    if (options.scope == NormalizationScope::kAllModels || record.per_model[t].success)
      scored.push_back(t);
  }
  const bool any_success = std::any_of(record.per_model.begin(), record.per_model.end(),
                                       [](const ModelOutcome& o) { return o.success; });
  if (!any_success) {
    if (options.no_signal == NoSignalPolicy::kDrop) throw NoSignalRecord(record.query_id);
    out.target.assign(T, 1.0 / static_cast<double>(T));
    return out;
  }

  std::vector<double> costs;
  costs.reserve(scored.size());
  for (std::size_t t : scored) costs.push_back(operational_cost(record.per_model[t].usage, pool[t]));
  const std::vector<double> normalized = cost_scores(costs, options.scaling);
  for (std::size_t k = 0; k < scored.size(); ++k) {
    const std::size_t t = scored[k];
    out.scores[t] = record.per_model[t].success ? normalized[k] : 0.0;
  }
  out.target = softmax(out.scores, options.temperature);
  return out;
}

std::vector<QueryRecord> Dataset::query_records() const {
  std::vector<QueryRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.record);
  return out;
}

namespace {

QueryRecord parse_record(const std::string& text, std::size_t line, std::size_t T) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, "<record>", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(line, "<record>", "expected a JSON object");

  auto require = [&](const json& obj, const char* name, const std::string& path) -> const json& {
    if (!obj.contains(name)) throw ParseError(line, path, "missing");
    return obj.at(name);
  };

  QueryRecord rec;
  const json& id = require(doc, "query_id", "query_id");
  if (!id.is_string()) throw ParseError(line, "query_id", "expected a string");
  rec.query_id = id.get<std::string>();

  const json& emb = require(doc, "embedding", "embedding");
  if (!emb.is_array()) throw ParseError(line, "embedding", "expected an array of numbers");
  rec.embedding.reserve(emb.size());
  for (const auto& v : emb) {
    if (!v.is_number()) throw ParseError(line, "embedding", "expected an array of numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(line, "embedding", "non-finite value");
    rec.embedding.push_back(x);
  }

  const json& models = require(doc, "models", "models");
  if (!models.is_array()) throw ParseError(line, "models", "expected an array");
  if (models.size() != T)
    throw ParseError(line, "models",
                     "expected " + std::to_string(T) + " entries (pool size), got " +
                         std::to_string(models.size()));
  for (std::size_t t = 0; t < T; ++t) {
    const json& m = models[t];
    const std::string base = "models[" + std::to_string(t) + "]";
    if (!m.is_object()) throw ParseError(line, base, "expected an object");
    const json& success = require(m, "success", base + ".success");
    ModelOutcome outcome;
    if (success.is_boolean()) {
      outcome.success = success.get<bool>();
    } else if (success.is_number_integer() && (success.get<long long>() == 0 || success.get<long long>() == 1)) {
      outcome.success = success.get<long long>() == 1;
    } else {
      throw ParseError(line, base + ".success", "expected 0 or 1");
    }
    auto tokens = [&](const char* name) {
      const json& v = require(m, name, base + "." + name);
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ParseError(line, base + "." + name, "expected a non-negative integer");
      return static_cast<std::int64_t>(v.get<long long>());
    };
    outcome.usage.prompt_tokens = tokens("prompt_tokens");
    outcome.usage.completion_tokens = tokens("completion_tokens");
    rec.per_model.push_back(outcome);
  }
  return rec;
}

json record_to_json(const QueryRecord& r) {
  json models = json::array();
  for (const auto& o : r.per_model) {
    models.push_back({{"success", o.success ? 1 : 0},
                      {"prompt_tokens", o.usage.prompt_tokens},
                      {"completion_tokens", o.usage.completion_tokens}});
  }
  json doc;
  doc["query_id"] = r.query_id;
  doc["embedding"] = r.embedding;
  doc["models"] = std::move(models);
  return doc;
}

}  // namespace

Dataset score_records(std::vector<QueryRecord> records, const ModelPool& pool,
                      const DatasetOptions& options) {
  Dataset out;
  out.records.reserve(records.size());
  for (auto& rec : records) {
    if (rec.embedding.size() != options.dimension)
      throw DimensionMismatch(options.dimension, rec.embedding.size(),
                              "record '" + rec.query_id + "' embedding");
    if (options.normalize_embeddings) l2_normalize(rec.embedding);
    try {
      ScoreVector score = build_scores(rec, pool, options.scoring);
      out.records.push_back({std::move(rec), std::move(score)});
    } catch (const NoSignalRecord&) {
      ++out.dropped;
    }
  }
  return out;
}

Dataset parse_dataset(std::istream& in, const ModelPool& pool, const DatasetOptions& options) {
  std::vector<QueryRecord> records;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    QueryRecord rec = parse_record(text, line, pool.size());
    if (rec.embedding.size() != options.dimension)
      throw DimensionMismatch(options.dimension, rec.embedding.size(),
                              "line " + std::to_string(line) + ": field 'embedding'");
    records.push_back(std::move(rec));
  }
  const bool empty = records.empty();
  Dataset out = score_records(std::move(records), pool, options);
  if (empty) out.warnings.push_back("dataset is empty");
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const ModelPool& pool,
                     const DatasetOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path.string());
  return parse_dataset(in, pool, options);
}

void write_records(std::ostream& out, std::span<const QueryRecord> records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

void write_scored(std::ostream& out, const Dataset& dataset) {
  for (const auto& r : dataset.records) {
    json doc = record_to_json(r.record);
    doc["scores"] = r.score.scores;
    doc["target"] = r.score.target;
    out << doc.dump() << '\n';
  }
}

}  // namespace webrouter
