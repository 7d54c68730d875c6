// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "webrouter/error.hpp"
#include "webrouter/numeric.hpp"

namespace webrouter {

std::size_t oracle_choice(const QueryRecord& record, const ModelPool& pool) {
  if (record.per_model.size() != pool.size())
    throw DimensionMismatch(pool.size(), record.per_model.size(), "record '" + record.query_id + "' outcomes");
  std::size_t best = pool.size();
  std::size_t cheapest = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  double cheapest_cost = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < pool.size(); ++t) {
    const double c = operational_cost(record.per_model[t].usage, pool[t]);
    if (c < cheapest_cost) {
      cheapest_cost = c;
      cheapest = t;
    }
    if (record.per_model[t].success && c < best_cost) {
      best_cost = c;
      best = t;
    }
  }
  return best == pool.size() ? cheapest : best;
}

std::vector<NamedPolicy> baselines(const ModelPool& pool, std::uint64_t seed) {
  std::vector<NamedPolicy> out;
  const std::vector<double> unit = pool.unit_costs();
  for (std::size_t t = 0; t < pool.size(); ++t) {
    out.push_back({"always-" + pool[t].model_id, [t, c = unit[t]](const QueryRecord&) {
                     return PolicyDecision{t, c};
                   }});
  }
  out.push_back({"random", [seed, unit](const QueryRecord& r) {
                   const std::size_t t = static_cast<std::size_t>(mix_seed(fnv1a(r.query_id), seed) % unit.size());
                   return PolicyDecision{t, unit[t]};
                 }});
  out.push_back({"oracle", [pool, unit](const QueryRecord& r) {
                   const std::size_t t = oracle_choice(r, pool);
                   return PolicyDecision{t, unit[t]};
                 }});
  return out;
}

NamedPolicy router_policy(const RouterParams& params, const ModelPool& pool, std::string name, InferenceMask mode) {
  return {std::move(name), [&params, pool, mode](const QueryRecord& r) {
            const RoutingDecision d = forward_infer(params, r.embedding, pool, mode);
            return PolicyDecision{d.chosen, d.expected_unit_cost};
          }};
}

const EvalRow& EvalReport::row(const std::string& policy) const {
  for (const auto& r : rows)
    if (r.policy == policy) return r;
  throw std::out_of_range("no evaluation row for policy '" + policy + "'");
}

EvalRow evaluate(const NamedPolicy& policy, std::span<const QueryRecord> records, const ModelPool& pool) {
  EvalRow row;
  row.policy = policy.name;
  row.queries = records.size();
  if (records.empty()) return row;
  double successes = 0.0, price = 0.0, unit = 0.0;
  for (const auto& r : records) {
    const PolicyDecision d = policy.policy(r);
    if (d.model >= pool.size()) throw std::out_of_range("policy '" + policy.name + "' chose an invalid model");
    successes += r.per_model[d.model].success ? 1.0 : 0.0;
    price += operational_cost(r.per_model[d.model].usage, pool[d.model]);
    unit += d.expected_unit_cost;
  }
  const double n = static_cast<double>(records.size());
  row.accuracy = successes / n;
  row.mean_price = price / n;
  row.mean_expected_unit_cost = unit / n;
  return row;
}

EvalReport evaluate_all(std::span<const NamedPolicy> policies, std::span<const QueryRecord> records,
                        const ModelPool& pool) {
  EvalReport report;
  for (const auto& p : policies) report.rows.push_back(evaluate(p, records, pool));
  return report;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "policy,queries,accuracy,mean_price,mean_expected_unit_cost\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), ",%zu,%.17g,%.17g,%.17g\n", r.queries, r.accuracy, r.mean_price,
                  r.mean_expected_unit_cost);
    out << r.policy << buf;
  }
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  std::size_t width = 6;
  for (const auto& r : report.rows) width = std::max(width, r.policy.size());
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %8s  %9s  %14s  %16s\n", static_cast<int>(width), "policy", "queries",
                "acc.(%)", "price($/query)", "unit($/Mtok)");
  out << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%-*s  %8zu  %9.2f  %14.6f  %16.4f\n", static_cast<int>(width), r.policy.c_str(),
                  r.queries, 100.0 * r.accuracy, r.mean_price, r.mean_expected_unit_cost * 1e6);
    out << buf;
  }
}

AffinityMatrix affinity_matrix(const RouterParams& params, std::span<const QueryRecord> records,
                               const ModelPool& pool) {
  const std::size_t T = pool.size();
  if (static_cast<std::size_t>(params.decoder_weight.rows()) != T)
    throw PoolMismatch("router output count differs from pool size");
  AffinityMatrix m;
  m.model_ids = pool.model_ids();
  m.mean.assign(T, std::vector<double>(T, 0.0));
  m.counts.assign(T, 0);

  std::vector<Eigen::VectorXd> rows;
  for (std::size_t t = 0; t < T; ++t) rows.push_back(params.decoder_weight.row(static_cast<Eigen::Index>(t)).transpose());

  for (const auto& r : records) {
    const bool solvable = std::any_of(r.per_model.begin(), r.per_model.end(),
                                      [](const ModelOutcome& o) { return o.success; });
    if (!solvable) continue;
    const std::size_t best = oracle_choice(r, pool);
    const Eigen::VectorXd z = inference_latent(params, r.embedding);
    const std::span<const double> zs(z.data(), static_cast<std::size_t>(z.size()));
    for (std::size_t t = 0; t < T; ++t)
      m.mean[best][t] += cosine_similarity(zs, std::span<const double>(rows[t].data(), zs.size()));
    ++m.counts[best];
  }
  for (std::size_t r = 0; r < T; ++r)
    if (m.counts[r] > 0)
      for (double& v : m.mean[r]) v /= static_cast<double>(m.counts[r]);
  return m;
}

void write_affinity_csv(std::ostream& out, const AffinityMatrix& matrix) {
  out << "best_model,queries";
  for (const auto& id : matrix.model_ids) out << ',' << id;
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < matrix.mean.size(); ++r) {
    out << matrix.model_ids[r] << ',' << matrix.counts[r];
    for (double v : matrix.mean[r]) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace webrouter
