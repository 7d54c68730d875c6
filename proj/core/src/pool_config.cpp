// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "webrouter/cost_model.hpp"
#include "webrouter/error.hpp"

namespace webrouter {

using nlohmann::json;

ModelPool parse_pool(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("pool config is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("models")) doc = doc.at("models");
  if (!doc.is_array()) throw Error("pool config must be a JSON array of models");

  std::vector<ModelSpec> models;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    auto field = [&](const char* name) -> const json& {
      if (!entry.is_object() || !entry.contains(name))
        throw Error("pool config entry " + std::to_string(i) + " is missing '" + name + "'");
      return entry.at(name);
    };
    const json& id = field("model_id");
    const json& prompt = field("prompt_price_per_million");
    const json& completion = field("completion_price_per_million");
    if (!id.is_string() || !prompt.is_number() || !completion.is_number())
      throw Error("pool config entry " + std::to_string(i) + " has a field of the wrong type");
    models.push_back(ModelSpec::per_million(id.get<std::string>(), prompt.get<double>(),
                                            completion.get<double>()));
  }
  try {
    return ModelPool(std::move(models));
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("invalid pool config: ") + e.what());
  }
}

ModelPool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pool config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_pool(buffer.str());
}

namespace {

// Per-token prices times 1e6 carry float noise (0.39999999999999997); 12 significant
// digits recovers the quoted value.
double quoted_per_million(double per_token) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", per_token * 1e6);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::string serialize_pool(const ModelPool& pool) {
  json doc = json::array();
  for (const auto& m : pool.models()) {
    doc.push_back({{"model_id", m.model_id},
                   {"prompt_price_per_million", quoted_per_million(m.prompt_price)},
                   {"completion_price_per_million", quoted_per_million(m.completion_price)}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace webrouter
