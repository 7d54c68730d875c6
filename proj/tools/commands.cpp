// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "http_server.hpp"
#include "webrouter/checkpoint.hpp"
#include "webrouter/embedding.hpp"
#include "webrouter/error.hpp"
#include "webrouter/evaluation.hpp"
#include "webrouter/service.hpp"
#include "webrouter/synthetic.hpp"

namespace webrouter::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoData = 2;
constexpr int kExitDiverged = 3;

void require_file(const std::filesystem::path& path, const char* what) {
  if (path.empty()) throw std::invalid_argument(std::string(what) + " path is required");
  if (!std::filesystem::is_regular_file(path))
    throw std::invalid_argument(std::string(what) + " '" + path.string() + "' does not exist");
}

void require_writable_parent(const std::filesystem::path& path, const char* what) {
  if (path.empty()) throw std::invalid_argument(std::string(what) + " path is required");
  const auto parent = path.parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent))
    throw std::invalid_argument(std::string(what) + " directory '" + parent.string() + "' does not exist");
}

std::ofstream open_output(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

void print_loss(std::ostream& out, const char* label, const LossBreakdown& l) {
  out << label << " total=" << fmt("%.6f", l.total) << " prediction=" << fmt("%.6f", l.prediction)
      << " compression=" << fmt("%.6f", l.compression) << " cost=" << fmt("%.6f", l.cost)
      << " mean_mask_rate=" << fmt("%.4f", l.mean_mask_rate) << '\n';
}

}  // namespace

std::pair<std::string, int> parse_bind_address(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == bind.size())
    throw std::invalid_argument("bind address must look like host:port, got '" + bind + "'");
  const std::string host = bind.substr(0, colon);
  int port = -1;
  try {
    std::size_t used = 0;
    port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1) port = -1;
  } catch (const std::exception&) {
    port = -1;
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("invalid port in bind address '" + bind + "'");
  return {host, port};
}

int cmd_score(const ScoreOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_file(options.data, "dataset");
    require_file(options.pool, "pool config");
    if (!options.out.empty()) require_writable_parent(options.out, "output");

    const ModelPool pool = load_pool(options.pool);
    const Dataset dataset = load_dataset(options.data, pool, options.dataset);
    for (const auto& w : dataset.warnings) err << "warning: " << w << '\n';

    out << "T=" << pool.size() << " N=" << dataset.records.size() + dataset.dropped
        << " usable=" << dataset.records.size() << " dropped=" << dataset.dropped << '\n';
    if (dataset.records.empty()) {
      err << "error: no trainable records\n";
      return kExitNoData;
    }
    for (std::size_t t = 0; t < pool.size(); ++t) {
      double mean = 0.0;
      for (const auto& r : dataset.records) mean += r.score.scores[t];
      mean /= static_cast<double>(dataset.records.size());
      out << "  " << pool[t].model_id << " mean_score=" << fmt("%.6f", mean) << '\n';
    }
    if (!options.out.empty()) {
      auto file = open_output(options.out);
      write_scored(file, dataset);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_file(options.data, "dataset");
    require_file(options.pool, "pool config");
    require_writable_parent(options.checkpoint, "checkpoint");
    if (!options.log.empty()) require_writable_parent(options.log, "log");
    options.train.validate();

    const ModelPool pool = load_pool(options.pool);
    const Dataset dataset = load_dataset(options.data, pool, options.dataset);
    for (const auto& w : dataset.warnings) err << "warning: " << w << '\n';
    if (dataset.records.empty()) {
      err << "error: no trainable records\n";
      return kExitNoData;
    }

    const TrainConfig& cfg = options.train;
    out << "training on " << dataset.records.size() << " records (dropped " << dataset.dropped << "), d="
        << options.dataset.dimension << " T=" << pool.size() << '\n'
        << "config: beta=" << cfg.beta << " lambda=" << cfg.lambda_cost << " lr=" << cfg.learning_rate
        << " steps=" << cfg.steps << " batch=" << cfg.batch_size << " seed=" << cfg.seed << '\n';

    auto make_checkpoint = [&](const RouterParams& params) {
      return Checkpoint{params, pool.model_ids(), options.dataset.normalize_embeddings};
    };
    StepCallback on_step;
    if (options.checkpoint_every > 0) {
      on_step = [&](std::size_t step, const RouterParams& params) {
        if (step % options.checkpoint_every != 0) return;
        auto path = options.checkpoint;
        path += ".step" + std::to_string(step);
        save_checkpoint(path, make_checkpoint(params));
      };
    }

    TrainResult result;
    try {
      result = train(dataset.records, pool, cfg, on_step);
    } catch (const NonFiniteError& e) {
      err << "error: training diverged: " << e.what() << '\n';
      return kExitDiverged;
    }

    save_checkpoint(options.checkpoint, make_checkpoint(result.params));
    if (!options.log.empty()) {
      auto file = open_output(options.log);
      write_log_csv(file, result.log);
    }
    if (!result.log.empty()) {
      print_loss(out, "first:", result.log.front().loss);
      print_loss(out, "final:", result.log.back().loss);
    }
    out << "checkpoint: " << options.checkpoint.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_route(const RouteOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_file(options.checkpoint, "checkpoint");
    require_file(options.pool, "pool config");
    if (options.text.has_value() == options.embedding_json.has_value())
      throw std::invalid_argument("provide exactly one of --text or --embedding");

    Checkpoint checkpoint = load_checkpoint(options.checkpoint);
    const ModelPool pool = load_pool(options.pool);
    const std::size_t d = checkpoint.params.dims().input;
    RouteService service(std::move(checkpoint), pool, nullptr);

    std::vector<double> embedding;
    if (options.embedding_json) {
      const auto doc = nlohmann::json::parse(*options.embedding_json, nullptr, false);
      if (doc.is_discarded() || !doc.is_array()) throw std::invalid_argument("--embedding must be a JSON array");
      for (const auto& v : doc) {
        if (!v.is_number()) throw std::invalid_argument("--embedding must contain only numbers");
        embedding.push_back(v.get<double>());
      }
    } else if (options.embeddings_file) {
      embedding = load_precomputed(*options.embeddings_file).embed(*options.text);
    } else {
      embedding = HashingEmbedder(d).embed(*options.text);
    }
    out << decision_to_json(service.route_embedding(embedding), pool) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_file(options.checkpoint, "checkpoint");
    require_file(options.data, "dataset");
    require_file(options.pool, "pool config");
    if (!options.report_csv.empty()) require_writable_parent(options.report_csv, "report");
    if (!options.affinity_csv.empty()) require_writable_parent(options.affinity_csv, "affinity");

    const Checkpoint checkpoint = load_checkpoint(options.checkpoint);
    const ModelPool pool = load_pool(options.pool);
    verify_pool(checkpoint, pool);

    DatasetOptions dataset_options;
    dataset_options.dimension = checkpoint.params.dims().input;
    dataset_options.normalize_embeddings = checkpoint.normalize_inputs;
    dataset_options.scoring = options.scoring;
    const Dataset dataset = load_dataset(options.data, pool, dataset_options);
    if (dataset.records.empty()) {
      err << "error: no usable records to evaluate\n";
      return kExitNoData;
    }
    const std::vector<QueryRecord> records = dataset.query_records();

    std::vector<NamedPolicy> policies = baselines(pool, options.seed);
    policies.push_back(router_policy(checkpoint.params, pool));
    const EvalReport report = evaluate_all(policies, records, pool);
    write_report_table(out, report);

    const AffinityMatrix affinity = affinity_matrix(checkpoint.params, records, pool);
    out << "\nquery-model affinity (rows: oracle model, cols: decoder row)\n";
    write_affinity_csv(out, affinity);

    if (!options.report_csv.empty()) {
      auto file = open_output(options.report_csv);
      write_report_csv(file, report);
    }
    if (!options.affinity_csv.empty()) {
      auto file = open_output(options.affinity_csv);
      write_affinity_csv(file, affinity);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_file(options.checkpoint, "checkpoint");
    require_file(options.pool, "pool config");
    const auto [host, port] = parse_bind_address(options.bind);

    Checkpoint checkpoint = load_checkpoint(options.checkpoint);
    const std::size_t d = checkpoint.params.dims().input;
    auto service = std::make_shared<const RouteService>(std::move(checkpoint), load_pool(options.pool),
                                                        std::make_unique<HashingEmbedder>(d));
    HttpServer server(service);
    const int bound = server.bind(host, port);
    if (bound < 0) throw Error("cannot bind " + options.bind);
    out << "listening on " << host << ':' << bound << " (T=" << service->pool().size()
        << ", pool " << service->pool().fingerprint() << ")" << std::endl;
    return server.listen_after_bind() ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_synth(const SynthOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_writable_parent(options.out, "output");
    if (!options.pool_out.empty()) require_writable_parent(options.pool_out, "pool output");
    if (options.n == 0) throw std::invalid_argument("--n must be positive");

    SyntheticPoolSpec spec = reference_synthetic_spec(options.dimension);
    spec.noise_sigma = options.noise_sigma;
    if (options.logistic) spec.success = SuccessModel::kLogistic;
    const SyntheticDataset data = generate_synthetic(spec, options.n, options.seed);

    auto file = open_output(options.out);
    write_records(file, data.records);
    if (!options.pool_out.empty()) {
      auto pool_file = open_output(options.pool_out);
      pool_file << serialize_pool(spec.pool());
    }
    out << "wrote " << data.records.size() << " records (d=" << options.dimension << ", seed=" << options.seed
        << ") to " << options.out.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace webrouter::cli
