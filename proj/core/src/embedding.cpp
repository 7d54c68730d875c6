// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/embedding.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "webrouter/error.hpp"
#include "webrouter/numeric.hpp"

namespace webrouter {

HashingEmbedder::HashingEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::vector<double> HashingEmbedder::embed(std::string_view text) const {
  if (text.empty()) throw std::invalid_argument("cannot embed empty text");
  std::string padded;
  padded.reserve(text.size() + 2);
  padded.push_back('\x02');
  padded.append(text);
  padded.push_back('\x03');

  std::vector<double> out(dimension_, 0.0);
  const std::string_view view(padded);
  for (std::size_t n = 2; n <= 3; ++n) {
    if (view.size() < n) continue;
    for (std::size_t i = 0; i + n <= view.size(); ++i) {
      const std::uint64_t h = mix_seed(fnv1a(view.substr(i, n), seed_ ^ n), 0);
      const std::size_t bucket = static_cast<std::size_t>(h % dimension_);
      out[bucket] += (h >> 63) ? -1.0 : 1.0;
    }
  }
  l2_normalize(out);
  return out;
}

PrecomputedEmbeddings::PrecomputedEmbeddings(std::size_t dimension,
                                             std::map<std::string, std::vector<double>> vectors)
    : dimension_(dimension), vectors_(vectors.begin(), vectors.end()) {
  for (const auto& [id, v] : vectors_) {
    if (v.size() != dimension_) throw DimensionMismatch(dimension_, v.size(), "embedding '" + id + "'");
    if (!all_finite(v)) throw Error("embedding '" + id + "' has non-finite entries");
  }
}

const std::vector<double>& PrecomputedEmbeddings::lookup(std::string_view query_id) const {
  auto it = vectors_.find(query_id);
  if (it == vectors_.end())
    throw Error("unknown query_id '" + std::string(query_id) + "' in precomputed embeddings");
  return it->second;
}

std::vector<double> PrecomputedEmbeddings::embed(std::string_view text) const {
  if (text.empty()) throw std::invalid_argument("cannot embed empty text");
  return lookup(text);
}

PrecomputedEmbeddings parse_precomputed(std::istream& in) {
  std::map<std::string, std::vector<double>> vectors;
  std::size_t dimension = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line, "<record>", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("query_id") || !doc.at("query_id").is_string())
      throw ParseError(line, "query_id", "missing or not a string");
    if (!doc.contains("vector") || !doc.at("vector").is_array())
      throw ParseError(line, "vector", "missing or not an array");
    std::vector<double> v;
    for (const auto& x : doc.at("vector")) {
      if (!x.is_number()) throw ParseError(line, "vector", "expected numbers");
      v.push_back(x.get<double>());
    }
    if (v.empty()) throw ParseError(line, "vector", "empty vector");
    if (dimension == 0) dimension = v.size();
    if (v.size() != dimension)
      throw DimensionMismatch(dimension, v.size(), "line " + std::to_string(line) + ": field 'vector'");
    auto id = doc.at("query_id").get<std::string>();
    if (!vectors.emplace(id, std::move(v)).second)
      throw ParseError(line, "query_id", "duplicate id '" + id + "'");
  }
  if (vectors.empty()) throw Error("precomputed embedding file has no entries");
  return PrecomputedEmbeddings(dimension, std::move(vectors));
}

PrecomputedEmbeddings load_precomputed(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return parse_precomputed(in);
}

}  // namespace webrouter
