// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace webrouter;
using namespace webrouter::cli;

namespace {

const std::map<std::string, NormalizationScope> kScopes = {
    {"succeeded", NormalizationScope::kSucceededModels}, {"all", NormalizationScope::kAllModels}};
const std::map<std::string, NoSignalPolicy> kNoSignal = {
    {"drop", NoSignalPolicy::kDrop}, {"uniform", NoSignalPolicy::kUniformTarget}};

void add_scoring_flags(CLI::App* app, ScoringOptions& scoring, double& fixed_scale) {
  app->add_option("--scope", scoring.scope, "Models included in per-query cost normalization")
      ->transform(CLI::CheckedTransformer(kScopes, CLI::ignore_case))
      ->default_str("succeeded");
  app->add_option("--no-signal", scoring.no_signal, "Handling of records where every model failed")
      ->transform(CLI::CheckedTransformer(kNoSignal, CLI::ignore_case))
      ->default_str("drop");
  app->add_option("--score-temperature", scoring.temperature, "Softmax temperature of score targets")
      ->capture_default_str();
  app->add_option("--cost-scale", fixed_scale,
                  "Fixed scale for exp(-cost/scale); default is the per-query mean cost");
}

void add_dataset_flags(CLI::App* app, DatasetOptions& dataset, bool& no_normalize) {
  app->add_option("--dim", dataset.dimension, "Embedding dimension")->capture_default_str();
  app->add_flag("--no-normalize", no_normalize, "Keep embeddings as given instead of L2-normalizing");
}

void finish_scoring(ScoringOptions& scoring, double fixed_scale) {
  if (fixed_scale > 0.0) {
    scoring.scaling.mode = CostScaling::Mode::kFixed;
    scoring.scaling.fixed_scale = fixed_scale;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"webrouter: cost-aware query routing over a pool of priced models"};
  app.require_subcommand(1);

  // score
  ScoreOptions score;
  double score_scale = 0.0;
  bool score_no_norm = false;
  auto* score_cmd = app.add_subcommand("score", "Attach cost-aware score vectors and targets to a dataset");
  score_cmd->add_option("--data", score.data, "Input records (JSON lines)")->required();
  score_cmd->add_option("--pool", score.pool, "Model pool config (JSON)")->required();
  score_cmd->add_option("--out", score.out, "Scored output (JSON lines)");
  add_dataset_flags(score_cmd, score.dataset, score_no_norm);
  add_scoring_flags(score_cmd, score.dataset.scoring, score_scale);

  // train
  TrainOptions train;
  double train_scale = 0.0;
  bool train_no_norm = false;
  bool raw_dollars = false;
  bool identity_encoder = false;
  auto* train_cmd = app.add_subcommand("train", "Train the router with the cost-aware VIB objective");
  train_cmd->add_option("--data", train.data, "Training records (JSON lines)")->required();
  train_cmd->add_option("--pool", train.pool, "Model pool config (JSON)")->required();
  train_cmd->add_option("--checkpoint", train.checkpoint, "Output checkpoint path")->required();
  train_cmd->add_option("--log", train.log, "Training log CSV");
  train_cmd->add_option("--checkpoint-every", train.checkpoint_every, "Also write <checkpoint>.step<k> every k steps");
  train_cmd->add_option("--beta", train.train.beta, "Weight of the mask KL term")->capture_default_str();
  train_cmd->add_option("--lambda", train.train.lambda_cost, "Weight of the expected unit cost term")
      ->capture_default_str();
  train_cmd->add_option("--lr", train.train.learning_rate, "AdamW learning rate")->capture_default_str();
  train_cmd->add_option("--steps", train.train.steps, "Optimizer steps")->capture_default_str();
  train_cmd->add_option("--batch-size", train.train.batch_size, "Mini-batch size")->capture_default_str();
  train_cmd->add_option("--seed", train.train.seed, "Seed for init, shuffling and mask noise")->capture_default_str();
  train_cmd->add_option("--weight-decay", train.train.adamw.weight_decay, "AdamW decoupled weight decay")
      ->capture_default_str();
  train_cmd->add_option("--adam-beta1", train.train.adamw.beta1)->capture_default_str();
  train_cmd->add_option("--adam-beta2", train.train.adamw.beta2)->capture_default_str();
  train_cmd->add_option("--adam-eps", train.train.adamw.epsilon)->capture_default_str();
  train_cmd->add_option("--hidden", train.train.hidden, "Latent width h (0 = input dimension)")->capture_default_str();
  train_cmd->add_option("--prior", train.train.prior_pi, "Bernoulli prior rate of the mask")->capture_default_str();
  train_cmd->add_option("--mask-temperature", train.train.mask_temperature, "Relaxed-Bernoulli temperature")
      ->capture_default_str();
  train_cmd->add_flag("--raw-dollar-costs", raw_dollars, "Use USD unit costs in the penalty instead of normalized");
  train_cmd->add_flag("--identity-encoder", identity_encoder, "Mask the raw embedding (h = d)");
  add_dataset_flags(train_cmd, train.dataset, train_no_norm);
  add_scoring_flags(train_cmd, train.dataset.scoring, train_scale);

  // route
  RouteOptions route;
  std::string route_embedding;
  std::string route_text;
  std::string route_embeddings_file;
  auto* route_cmd = app.add_subcommand("route", "Route one query and print the decision as JSON");
  route_cmd->add_option("--checkpoint", route.checkpoint, "Trained router checkpoint")->required();
  route_cmd->add_option("--pool", route.pool, "Model pool config (JSON); must match the checkpoint")->required();
  auto* text_opt = route_cmd->add_option("--text", route_text, "Query text (or query_id with --embeddings)");
  auto* emb_opt = route_cmd->add_option("--embedding", route_embedding, "Embedding as a JSON array");
  route_cmd->add_option("--embeddings", route_embeddings_file, "Precomputed embeddings (JSON lines)")->needs(text_opt);
  text_opt->excludes(emb_opt);

  // evaluate
  EvaluateOptions evaluate;
  double eval_scale = 0.0;
  auto* eval_cmd = app.add_subcommand("evaluate", "Compare the router with baseline policies");
  eval_cmd->add_option("--checkpoint", evaluate.checkpoint, "Trained router checkpoint")->required();
  eval_cmd->add_option("--data", evaluate.data, "Evaluation records (JSON lines)")->required();
  eval_cmd->add_option("--pool", evaluate.pool, "Model pool config (JSON); must match the checkpoint")->required();
  eval_cmd->add_option("--report-csv", evaluate.report_csv, "Write the policy comparison as CSV");
  eval_cmd->add_option("--affinity-csv", evaluate.affinity_csv, "Write the query-model affinity matrix as CSV");
  eval_cmd->add_option("--seed", evaluate.seed, "Seed of the random baseline")->capture_default_str();
  add_scoring_flags(eval_cmd, evaluate.scoring, eval_scale);

  // serve
  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve routing decisions over HTTP");
  serve_cmd->add_option("--checkpoint", serve.checkpoint, "Trained router checkpoint")->required();
  serve_cmd->add_option("--pool", serve.pool, "Model pool config (JSON); must match the checkpoint")->required();
  serve_cmd->add_option("--bind", serve.bind, "host:port")->capture_default_str();

  // synth
  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset over the reference pool");
  synth_cmd->add_option("--out", synth.out)->required();
  synth_cmd->add_option("--pool-out", synth.pool_out, "Also write the pool config");
  synth_cmd->add_option("--n", synth.n)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--dim", synth.dimension)->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise_sigma)->capture_default_str();
  synth_cmd->add_flag("--logistic", synth.logistic, "Logistic instead of threshold success model");

  CLI11_PARSE(app, argc, argv);

  if (*score_cmd) {
    score.dataset.normalize_embeddings = !score_no_norm;
    finish_scoring(score.dataset.scoring, score_scale);
    return cmd_score(score, std::cout, std::cerr);
  }
  if (*train_cmd) {
    train.dataset.normalize_embeddings = !train_no_norm;
    finish_scoring(train.dataset.scoring, train_scale);
    if (raw_dollars) train.train.cost_units = CostUnits::kRawDollars;
    if (identity_encoder) train.train.encoder = EncoderKind::kIdentity;
    return cmd_train(train, std::cout, std::cerr);
  }
  if (*route_cmd) {
    if (*text_opt) route.text = route_text;
    if (*emb_opt) route.embedding_json = route_embedding;
    if (!route_embeddings_file.empty()) route.embeddings_file = route_embeddings_file;
    return cmd_route(route, std::cout, std::cerr);
  }
  if (*eval_cmd) {
    finish_scoring(evaluate.scoring, eval_scale);
    return cmd_evaluate(evaluate, std::cout, std::cerr);
  }
  if (*serve_cmd) return cmd_serve(serve, std::cout, std::cerr);
  if (*synth_cmd) return cmd_synth(synth, std::cout, std::cerr);
  return 1;
}
