// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "webrouter/cost_model.hpp"
#include "webrouter/router.hpp"

namespace webrouter {

/// A trained router together with what is needed to serve it.
///
/// On disk: the magic "WRCKPT01", a little-endian u64 header length, a JSON header with
/// format_version, dims {d, h, T}, prior_pi, temperature, encoder, normalize_inputs,
/// model_ids and the block layout, then every block as little-endian float64 in row-major
/// order.
struct Checkpoint {
  static constexpr int kFormatVersion = 1;

  RouterParams params;
  std::vector<std::string> model_ids;
  /// Whether embeddings were L2-normalized during training; applied again at inference.
  bool normalize_inputs = true;
};

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Throws PoolMismatch naming both model lists unless the checkpoint was trained on a pool
/// with the same ids in the same order.
void verify_pool(const Checkpoint& checkpoint, const ModelPool& pool);

}  // namespace webrouter
