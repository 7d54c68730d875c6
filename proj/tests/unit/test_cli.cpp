// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "support.hpp"
#include "webrouter/checkpoint.hpp"

namespace webrouter::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = webrouter::testing::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    SynthOptions synth;
    synth.out = dir_ / "data.jsonl";
    synth.pool_out = dir_ / "pool.json";
    synth.n = 300;
    synth.dimension = 8;
    synth.seed = 3;
    ASSERT_EQ(cmd_synth(synth, out_, err_), 0) << err_.str();
  }

  TrainOptions train_options(std::size_t steps = 40) const {
    TrainOptions t;
    t.data = dir_ / "data.jsonl";
    t.pool = dir_ / "pool.json";
    t.checkpoint = dir_ / "router.ckpt";
    t.log = dir_ / "train.csv";
    t.dataset.dimension = 8;
    t.train.steps = steps;
    t.train.learning_rate = 1e-2;
    return t;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, ScoreSummaryAndDeterminism) {
  ScoreOptions s;
  s.data = dir_ / "data.jsonl";
  s.pool = dir_ / "pool.json";
  s.out = dir_ / "scored_a.jsonl";
  s.dataset.dimension = 8;
  ASSERT_EQ(cmd_score(s, out_, err_), 0) << err_.str();
  EXPECT_NE(out_.str().find("T=3 N=300"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("dropped="), std::string::npos);
  s.out = dir_ / "scored_b.jsonl";
  ASSERT_EQ(cmd_score(s, out_, err_), 0);
  EXPECT_EQ(slurp(dir_ / "scored_a.jsonl"), slurp(dir_ / "scored_b.jsonl"));
}

void write_jsonl(const fs::path& path, const std::vector<int>& success_counts) {
  std::ofstream f(path);
  for (std::size_t i = 0; i < success_counts.size(); ++i) {
    f << R"({"query_id": "r)" << i << R"(", "embedding": [1,0,0,0,0,0,0,0], "models": [)";
    for (int t = 0; t < 3; ++t)
      f << (t ? "," : "") << R"({"success": )" << (t < success_counts[i] ? 1 : 0)
        << R"(, "prompt_tokens": 1000, "completion_tokens": 100})";
    f << "]}\n";
  }
}

TEST_F(CliTest, ScoreThreeRecordFile) {
  write_jsonl(dir_ / "three.jsonl", {3, 0, 1});
  ScoreOptions s;
  s.data = dir_ / "three.jsonl";
  s.pool = dir_ / "pool.json";
  s.dataset.dimension = 8;
  EXPECT_EQ(cmd_score(s, out_, err_), 0) << err_.str();
  EXPECT_NE(out_.str().find("T=3 N=3 usable=2 dropped=1"), std::string::npos) << out_.str();
}

TEST_F(CliTest, ScoreAllFailureFile) {
  write_jsonl(dir_ / "fail.jsonl", {0, 0, 0});
  ScoreOptions s;
  s.data = dir_ / "fail.jsonl";
  s.pool = dir_ / "pool.json";
  s.dataset.dimension = 8;
  EXPECT_NE(cmd_score(s, out_, err_), 0);
  EXPECT_NE(out_.str().find("usable=0"), std::string::npos);
  EXPECT_NE(err_.str().find("no trainable records"), std::string::npos);
}

TEST_F(CliTest, ScoreNamesMalformedLine) {
  std::ifstream in(dir_ / "data.jsonl");
  std::ofstream f(dir_ / "bad.jsonl");
  std::string line;
  std::getline(in, line);
  f << line << "\n" << R"({"query_id": 5})" << "\n";
  f.close();
  ScoreOptions s;
  s.data = dir_ / "bad.jsonl";
  s.pool = dir_ / "pool.json";
  s.dataset.dimension = 8;
  EXPECT_EQ(cmd_score(s, out_, err_), 1);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();
}

TEST_F(CliTest, TrainWritesLoadableCheckpointAndLog) {
  const TrainOptions t = train_options();
  ASSERT_EQ(cmd_train(t, out_, err_), 0) << err_.str();
  const Checkpoint ck = load_checkpoint(t.checkpoint);
  EXPECT_EQ(ck.params.dims().input, 8u);
  EXPECT_EQ(ck.model_ids, reference_pool().model_ids());
  std::ifstream log(t.log);
  std::string header;
  std::getline(log, header);
  EXPECT_EQ(header, "step,total,prediction,compression,cost,mean_mask_rate");
  EXPECT_NE(out_.str().find("final:"), std::string::npos);
}

TEST_F(CliTest, TrainZeroStepsEqualsInitialization) {
  TrainOptions t = train_options(0);
  ASSERT_EQ(cmd_train(t, out_, err_), 0) << err_.str();
  const Checkpoint ck = load_checkpoint(t.checkpoint);
  const RouterParams init = init_router(8, 3, t.train.router_init());
  for (std::size_t k = 0; k < 6; ++k) {
    const auto a = ck.params.blocks()[k];
    const auto b = init.blocks()[k];
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_F(CliTest, TrainIsBytewiseRepeatable) {
  TrainOptions t = train_options();
  t.checkpoint_every = 20;
  ASSERT_EQ(cmd_train(t, out_, err_), 0);
  const std::string ck = slurp(t.checkpoint), log = slurp(t.log);
  EXPECT_TRUE(fs::exists(dir_ / "router.ckpt.step20"));
  EXPECT_TRUE(fs::exists(dir_ / "router.ckpt.step40"));
  ASSERT_EQ(cmd_train(t, out_, err_), 0);
  EXPECT_EQ(slurp(t.checkpoint), ck);
  EXPECT_EQ(slurp(t.log), log);
}

TEST_F(CliTest, TrainRejectsMissingInputsEarly) {
  TrainOptions t = train_options();
  t.data = dir_ / "nope.jsonl";
  EXPECT_EQ(cmd_train(t, out_, err_), 1);
  EXPECT_NE(err_.str().find("nope.jsonl"), std::string::npos);
  EXPECT_FALSE(fs::exists(t.checkpoint));
}

TEST_F(CliTest, TrainDivergenceExitCode) {
  TrainOptions t = train_options(10);
  t.train.learning_rate = 1e300;
  EXPECT_EQ(cmd_train(t, out_, err_), 3);
  EXPECT_NE(err_.str().find("at step"), std::string::npos) << err_.str();
}

TEST_F(CliTest, RouteIsDeterministicAndValid) {
  ASSERT_EQ(cmd_train(train_options(), out_, err_), 0);
  RouteOptions r;
  r.checkpoint = dir_ / "router.ckpt";
  r.pool = dir_ / "pool.json";
  r.embedding_json = "[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]";
  std::ostringstream a, b;
  ASSERT_EQ(cmd_route(r, a, err_), 0) << err_.str();
  ASSERT_EQ(cmd_route(r, b, err_), 0);
  EXPECT_EQ(a.str(), b.str());
  const auto doc = nlohmann::json::parse(a.str());
  double total = 0.0;
  for (const auto& p : doc["probs"]) total += p.get<double>();
  EXPECT_NEAR(total, 1.0, 1e-9);

  r.embedding_json.reset();
  r.text = "compare two laptops";
  std::ostringstream c;
  EXPECT_EQ(cmd_route(r, c, err_), 0) << err_.str();

  r.text.reset();
  r.embedding_json = "[0.1, 0.2]";
  std::ostringstream d_err;
  EXPECT_EQ(cmd_route(r, c, d_err), 1);
  EXPECT_NE(d_err.str().find("dimension"), std::string::npos) << d_err.str();
}

TEST_F(CliTest, RouteFromPrecomputedEmbeddings) {
  ASSERT_EQ(cmd_train(train_options(), out_, err_), 0);
  {
    std::ofstream f(dir_ / "vectors.jsonl");
    f << R"({"query_id": "q-1", "vector": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]})" << '\n';
  }
  RouteOptions r;
  r.checkpoint = dir_ / "router.ckpt";
  r.pool = dir_ / "pool.json";
  r.text = "q-1";
  r.embeddings_file = dir_ / "vectors.jsonl";
  std::ostringstream from_file, inline_vec;
  ASSERT_EQ(cmd_route(r, from_file, err_), 0) << err_.str();
  r.text.reset();
  r.embeddings_file.reset();
  r.embedding_json = "[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]";
  ASSERT_EQ(cmd_route(r, inline_vec, err_), 0);
  EXPECT_EQ(from_file.str(), inline_vec.str());
}

TEST_F(CliTest, RoutePoolMismatchNamesBothLists) {
  ASSERT_EQ(cmd_train(train_options(), out_, err_), 0);
  {
    std::ofstream f(dir_ / "other.json");
    f << R"([{"model_id": "gpt-4o", "prompt_price_per_million": 5, "completion_price_per_million": 15},
             {"model_id": "gpt-4.1-mini", "prompt_price_per_million": 0.4, "completion_price_per_million": 1.6},
             {"model_id": "gemini-2.5-flash", "prompt_price_per_million": 0.3, "completion_price_per_million": 2.5}])";
  }
  RouteOptions r;
  r.checkpoint = dir_ / "router.ckpt";
  r.pool = dir_ / "other.json";
  r.text = "anything";
  EXPECT_EQ(cmd_route(r, out_, err_), 1);
  EXPECT_NE(err_.str().find("[gemini-2.5-flash, gpt-4.1-mini, gpt-4o]"), std::string::npos) << err_.str();
  EXPECT_NE(err_.str().find("[gpt-4o, gpt-4.1-mini, gemini-2.5-flash]"), std::string::npos) << err_.str();
}

TEST_F(CliTest, EvaluateWritesReports) {
  ASSERT_EQ(cmd_train(train_options(), out_, err_), 0);
  EvaluateOptions e;
  e.checkpoint = dir_ / "router.ckpt";
  e.data = dir_ / "data.jsonl";
  e.pool = dir_ / "pool.json";
  e.report_csv = dir_ / "report.csv";
  e.affinity_csv = dir_ / "affinity.csv";
  std::ostringstream out;
  ASSERT_EQ(cmd_evaluate(e, out, err_), 0) << err_.str();
  EXPECT_NE(out.str().find("oracle"), std::string::npos);
  EXPECT_NE(out.str().find("router"), std::string::npos);
  const std::string report = slurp(e.report_csv);
  EXPECT_EQ(report.substr(0, report.find('\n')), "policy,queries,accuracy,mean_price,mean_expected_unit_cost");
  EXPECT_TRUE(fs::exists(e.affinity_csv));
}

TEST(BindAddress, Parsing) {
  EXPECT_EQ(parse_bind_address("127.0.0.1:8080"), std::make_pair(std::string("127.0.0.1"), 8080));
  EXPECT_EQ(parse_bind_address("0.0.0.0:0"), std::make_pair(std::string("0.0.0.0"), 0));
  EXPECT_THROW(parse_bind_address("localhost"), std::invalid_argument);
  EXPECT_THROW(parse_bind_address("host:99999"), std::invalid_argument);
}

}  // namespace
}  // namespace webrouter::cli
