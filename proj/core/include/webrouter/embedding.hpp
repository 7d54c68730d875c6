// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace webrouter {

/// Source of query embeddings. Implementations are immutable after construction and
/// safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dimension() const = 0;

  /// Throws std::invalid_argument on empty text.
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Signed feature hashing of character 2- and 3-grams into `dimension` buckets, followed by
/// L2 normalization. The text is wrapped in boundary markers so one-character inputs still
/// produce n-grams.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x5745'4252'4f55'5445ULL;

  explicit HashingEmbedder(std::size_t dimension, std::uint64_t seed = kDefaultSeed);

  std::string_view name() const override { return "hashing"; }
  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

/// Serves stored vectors keyed by query_id. `embed(text)` treats the text as a query_id.
class PrecomputedEmbeddings final : public EmbeddingProvider {
 public:
  PrecomputedEmbeddings(std::size_t dimension, std::map<std::string, std::vector<double>> vectors);

  std::string_view name() const override { return "precomputed"; }
  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;

  /// Throws Error naming the id when it is unknown.
  const std::vector<double>& lookup(std::string_view query_id) const;
  std::size_t size() const noexcept { return vectors_.size(); }

 private:
  std::size_t dimension_;
  std::map<std::string, std::vector<double>, std::less<>> vectors_;
};

/// Reads JSON lines {"query_id": str, "vector": [float; d]}. Every entry must share one
/// dimension; a duplicated id or mixed dimensions is a load error.
PrecomputedEmbeddings load_precomputed(const std::filesystem::path& path);
PrecomputedEmbeddings parse_precomputed(std::istream& in);

}  // namespace webrouter
