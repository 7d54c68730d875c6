// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "webrouter/cost_model.hpp"

namespace webrouter {
namespace {

const ModelSpec kGpt4o = ModelSpec::per_million("gpt-4o", 5.0, 15.0);
const ModelSpec kFlash = ModelSpec::per_million("gemini-2.5-flash", 0.30, 2.50);
const ModelSpec kMini = ModelSpec::per_million("gpt-4.1-mini", 0.40, 1.60);

TEST(OperationalCost, PublishedPrices) {
  EXPECT_NEAR(operational_cost({1000, 100}, kGpt4o), 0.0065, 1e-15);
  EXPECT_NEAR(operational_cost({1000, 100}, kFlash), 0.00055, 1e-15);
  EXPECT_EQ(operational_cost({0, 0}, kGpt4o), 0.0);
}

TEST(OperationalCost, LinearInTokenCounts) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> n(0, 100000);
  for (int i = 0; i < 1000; ++i) {
    const UsageCounts a{n(rng), n(rng)};
    const UsageCounts b{n(rng), n(rng)};
    const UsageCounts sum{a.prompt_tokens + b.prompt_tokens, a.completion_tokens + b.completion_tokens};
    const double lhs = operational_cost(sum, kMini);
    const double rhs = operational_cost(a, kMini) + operational_cost(b, kMini);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, lhs));
  }
}

TEST(UnitCost, PublishedPrices) {
  EXPECT_NEAR(unit_cost(kGpt4o), 20e-6, 1e-18);
  EXPECT_NEAR(unit_cost(kMini), 2.0e-6, 1e-18);
  EXPECT_EQ(unit_cost(ModelSpec{"free", 0.0, 0.0}), 0.0);
}

TEST(CostScores, MiddleValueMatchesHighPrecisionOracle) {
  // kappa = 0.0026667; exp/min-max evaluated at 30 digits offline.
  const std::vector<double> costs{0.001, 0.002, 0.005};
  const auto s = cost_scores(costs);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_NEAR(s[1], 0.59747346959849188, 1e-14);
  EXPECT_DOUBLE_EQ(s[2], 0.0);
}

TEST(CostScores, MatchesScalarFormula) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto costs = testing::random_vector(rng, 2 + trial % 5, 0.0, 0.01);
    double kappa = 0.0;
    for (double c : costs) kappa += c;
    kappa /= static_cast<double>(costs.size());
    std::vector<double> u;
    for (double c : costs) u.push_back(std::exp(-c / kappa));
    const double lo = *std::min_element(u.begin(), u.end());
    const double hi = *std::max_element(u.begin(), u.end());
    const auto s = cost_scores(costs);
    for (std::size_t t = 0; t < costs.size(); ++t) EXPECT_NEAR(s[t], (u[t] - lo) / (hi - lo), 1e-12);
  }
}

TEST(CostScores, EqualCostsGiveAllOnes) {
  for (double c : {0.0, 1e-9, 0.004, 3.0}) {
    const auto s = cost_scores(std::vector<double>{c, c, c});
    for (double v : s) EXPECT_EQ(v, 1.0);
  }
}

TEST(CostScores, FixedScale) {
  const std::vector<double> costs{0.0, 1.0, 2.0};
  const auto s = cost_scores(costs, {CostScaling::Mode::kFixed, 1.0});
  const double e1 = std::exp(-1.0), e2 = std::exp(-2.0);
  EXPECT_NEAR(s[1], (e1 - e2) / (1.0 - e2), 1e-14);
  EXPECT_THROW(cost_scores(costs, {CostScaling::Mode::kFixed, 0.0}), std::invalid_argument);
}

TEST(CostScores, RejectsMalformedInput) {
  EXPECT_THROW(cost_scores(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(cost_scores(std::vector<double>{0.1, -0.1}), std::invalid_argument);
}

TEST(CostScoresProperty, RangeEndpointsMonotonicityAndScale) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> factor(1e-3, 1e3);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto costs = testing::random_vector(rng, 2 + trial % 6, 0.0, 0.02);
    const auto s = cost_scores(costs);
    int ones = 0, zeros = 0;
    for (std::size_t a = 0; a < costs.size(); ++a) {
      ASSERT_GE(s[a], 0.0);
      ASSERT_LE(s[a], 1.0);
      ones += s[a] == 1.0;
      zeros += s[a] == 0.0;
      for (std::size_t b = 0; b < costs.size(); ++b)
        if (costs[a] < costs[b]) ASSERT_GE(s[a], s[b]);
    }
    EXPECT_EQ(ones, 1);
    EXPECT_EQ(zeros, 1);

    std::vector<double> scaled = costs;
    const double k = factor(rng);
    for (double& c : scaled) c *= k;
    const auto s2 = cost_scores(scaled);
    for (std::size_t a = 0; a < costs.size(); ++a) EXPECT_NEAR(s[a], s2[a], 1e-9);
  }
}

TEST(ModelPool, Validation) {
  EXPECT_THROW(ModelPool({kGpt4o}), std::invalid_argument);
  EXPECT_THROW(ModelPool({kGpt4o, kGpt4o}), std::invalid_argument);
  EXPECT_THROW(ModelPool({kGpt4o, ModelSpec{"neg", -1.0, 0.0}}), std::invalid_argument);
  const ModelPool pool({kFlash, kMini, kGpt4o});
  EXPECT_EQ(pool.index_of("gpt-4.1-mini"), 1u);
  EXPECT_EQ(pool.index_of("missing"), 3u);
  EXPECT_DOUBLE_EQ(pool.max_unit_cost(), unit_cost(kGpt4o));
}

TEST(ModelPool, ReferencePoolPrices) {
  const ModelPool pool = reference_pool();
  ASSERT_EQ(pool.size(), 3u);
  const auto unit = pool.unit_costs();
  EXPECT_NEAR(unit[0], 2.8e-6, 1e-18);
  EXPECT_NEAR(unit[1], 2.0e-6, 1e-18);
  EXPECT_NEAR(unit[2], 20e-6, 1e-18);
}

TEST(ModelPool, ConfigRoundTrip) {
  const ModelPool pool = reference_pool();
  const ModelPool back = parse_pool(serialize_pool(pool));
  ASSERT_EQ(back.size(), pool.size());
  for (std::size_t t = 0; t < pool.size(); ++t) {
    EXPECT_EQ(back[t].model_id, pool[t].model_id);
    EXPECT_NEAR(back[t].prompt_price, pool[t].prompt_price, 1e-20);
    EXPECT_NEAR(back[t].completion_price, pool[t].completion_price, 1e-20);
  }
  EXPECT_EQ(back.fingerprint(), pool.fingerprint());

  const ModelPool wrapped = parse_pool(
      R"({"models": [{"model_id": "a", "prompt_price_per_million": 1, "completion_price_per_million": 2},
                     {"model_id": "b", "prompt_price_per_million": 3, "completion_price_per_million": 4}]})");
  EXPECT_NEAR(wrapped[1].completion_price, 4e-6, 1e-20);
  EXPECT_THROW(parse_pool(R"([{"model_id": "a"}])"), std::exception);
}

TEST(ModelPool, FingerprintTracksPrices) {
  const ModelPool a({kFlash, kGpt4o});
  const ModelPool b({kFlash, ModelSpec::per_million("gpt-4o", 5.0, 15.5)});
  EXPECT_EQ(a.fingerprint().size(), 16u);
  EXPECT_NE(a.fingerprint(), b.fingerprint());
}

}  // namespace
}  // namespace webrouter
