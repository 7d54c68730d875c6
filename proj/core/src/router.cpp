// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/router.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "webrouter/error.hpp"
#include "webrouter/numeric.hpp"

namespace webrouter {

namespace {

template <typename Dense>
std::span<double> as_span(Dense& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename Dense>
std::span<const double> as_span(const Dense& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

// Uniform in (0, 1), never exactly 0 or 1.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double clamp_rate(double p) { return std::clamp(p, kMinMaskRate, 1.0 - kMinMaskRate); }

}  // namespace

std::array<std::span<double>, 6> RouterWeights::blocks() {
  return {as_span(encoder_weight), as_span(encoder_bias), as_span(mask_weight),
          as_span(mask_bias),      as_span(decoder_weight), as_span(decoder_bias)};
}

std::array<std::span<const double>, 6> RouterWeights::blocks() const {
  return {as_span(encoder_weight), as_span(encoder_bias), as_span(mask_weight),
          as_span(mask_bias),      as_span(decoder_weight), as_span(decoder_bias)};
}

std::size_t RouterWeights::parameter_count() const {
  std::size_t n = 0;
  for (auto b : blocks()) n += b.size();
  return n;
}

RouterWeights RouterWeights::zeros_like(const RouterWeights& like) {
  RouterWeights out;
  out.encoder_weight = Eigen::MatrixXd::Zero(like.encoder_weight.rows(), like.encoder_weight.cols());
  out.encoder_bias = Eigen::VectorXd::Zero(like.encoder_bias.size());
  out.mask_weight = Eigen::MatrixXd::Zero(like.mask_weight.rows(), like.mask_weight.cols());
  out.mask_bias = Eigen::VectorXd::Zero(like.mask_bias.size());
  out.decoder_weight = Eigen::MatrixXd::Zero(like.decoder_weight.rows(), like.decoder_weight.cols());
  out.decoder_bias = Eigen::VectorXd::Zero(like.decoder_bias.size());
  return out;
}

RouterDims RouterParams::dims() const {
  RouterDims d;
  d.hidden = static_cast<std::size_t>(mask_weight.rows());
  d.models = static_cast<std::size_t>(decoder_weight.rows());
  d.input = encoder == EncoderKind::kIdentity ? d.hidden
                                              : static_cast<std::size_t>(encoder_weight.cols());
  return d;
}

void RouterParams::validate() const {
  const auto h = mask_weight.rows();
  if (h == 0 || mask_weight.cols() != h || mask_bias.size() != h)
    throw std::invalid_argument("router: mask head must be h x h with an h-vector bias");
  if (decoder_weight.rows() < 2 || decoder_weight.cols() != h ||
      decoder_bias.size() != decoder_weight.rows())
    throw std::invalid_argument("router: decoder must be T x h (T >= 2) with a T-vector bias");
  if (encoder == EncoderKind::kTanh) {
    if (encoder_weight.rows() != h || encoder_weight.cols() == 0 || encoder_bias.size() != h)
      throw std::invalid_argument("router: encoder must be h x d with an h-vector bias");
  } else if (encoder_weight.size() != 0 || encoder_bias.size() != 0) {
    throw std::invalid_argument("router: identity encoder carries no weights");
  }
  for (auto b : blocks())
    if (!all_finite(b)) throw std::invalid_argument("router: non-finite weight");
  if (!(prior_pi > 0.0 && prior_pi < 1.0)) throw std::invalid_argument("router: prior_pi must be in (0,1)");
  if (!(temperature > 0.0)) throw std::invalid_argument("router: temperature must be positive");
}

RouterParams init_router(std::size_t input_dim, std::size_t models, const RouterInit& init) {
  if (input_dim == 0 || models < 2) throw std::invalid_argument("init_router: need d > 0 and T >= 2");
  const std::size_t h = init.hidden == 0 ? input_dim : init.hidden;
  if (init.encoder == EncoderKind::kIdentity && h != input_dim)
    throw std::invalid_argument("init_router: identity encoder requires hidden == input");

  std::mt19937_64 rng(init.seed);
  auto glorot = [&rng](Eigen::Index rows, Eigen::Index cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = (2.0 * open_uniform(rng) - 1.0) * limit;
    return m;
  };

  RouterParams p;
  p.encoder = init.encoder;
  p.prior_pi = init.prior_pi;
  p.temperature = init.temperature;
  const auto hi = static_cast<Eigen::Index>(h);
  if (init.encoder == EncoderKind::kTanh) {
    p.encoder_weight = glorot(hi, static_cast<Eigen::Index>(input_dim));
    p.encoder_bias = Eigen::VectorXd::Zero(hi);
  }
  p.mask_weight = glorot(hi, hi);
  p.mask_bias = Eigen::VectorXd::Zero(hi);
  p.decoder_weight = glorot(static_cast<Eigen::Index>(models), hi);
  p.decoder_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(models));
  p.validate();
  return p;
}

Encoding encode(const RouterParams& params, std::span<const double> embedding) {
  const RouterDims dims = params.dims();
  if (embedding.size() != dims.input) throw DimensionMismatch(dims.input, embedding.size(), "router input");
  const Eigen::Map<const Eigen::VectorXd> x(embedding.data(), static_cast<Eigen::Index>(embedding.size()));

  Encoding out;
  if (params.encoder == EncoderKind::kIdentity) {
    out.features = x;
  } else {
    out.features = (params.encoder_weight * x + params.encoder_bias).array().tanh().matrix();
  }
  const Eigen::VectorXd logits = params.mask_weight * out.features + params.mask_bias;
  out.mask.probs = logits.unaryExpr([](double a) { return clamp_rate(sigmoid(a)); });
  return out;
}

Eigen::VectorXd logistic_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double u = open_uniform(rng);
    out[static_cast<Eigen::Index>(j)] = std::log(u) - std::log1p(-u);
  }
  return out;
}

Eigen::VectorXd sample_mask(const MaskDistribution& mask, double temperature, std::uint64_t seed) {
  if (!(temperature > 0.0)) throw std::invalid_argument("sample_mask: temperature must be positive");
  const Eigen::VectorXd noise = logistic_noise(static_cast<std::size_t>(mask.probs.size()), seed);
  Eigen::VectorXd out(mask.probs.size());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const double p = mask.probs[j];
    out[j] = sigmoid((std::log(p) - std::log1p(-p) + noise[j]) / temperature);
  }
  return out;
}

Eigen::VectorXd decode(const RouterParams& params, const Eigen::VectorXd& latent) {
  if (latent.size() != params.decoder_weight.cols())
    throw DimensionMismatch(static_cast<std::size_t>(params.decoder_weight.cols()),
                            static_cast<std::size_t>(latent.size()), "router latent");
  const Eigen::VectorXd logits = params.decoder_weight * latent + params.decoder_bias;
  const auto p = softmax(std::span<const double>(logits.data(), static_cast<std::size_t>(logits.size())));
  return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

TrainForward forward_train(const RouterParams& params, std::span<const double> embedding,
                           std::uint64_t seed) {
  Encoding enc = encode(params, embedding);
  TrainForward out;
  out.latent = sample_mask(enc.mask, params.temperature, seed).cwiseProduct(enc.features);
  out.probs = decode(params, out.latent);
  out.mask = std::move(enc.mask);
  return out;
}

namespace {

Eigen::VectorXd expected_latent(const Encoding& enc, InferenceMask mode) {
  if (mode == InferenceMask::kThreshold) {
    return enc.mask.probs.unaryExpr([](double p) { return p > 0.5 ? 1.0 : 0.0; }).cwiseProduct(enc.features);
  }
  return enc.mask.probs.cwiseProduct(enc.features);
}

}  // namespace

Eigen::VectorXd inference_latent(const RouterParams& params, std::span<const double> embedding,
                                 InferenceMask mode) {
  return expected_latent(encode(params, embedding), mode);
}

RoutingDecision forward_infer(const RouterParams& params, std::span<const double> embedding,
                              const ModelPool& pool, InferenceMask mode) {
  if (static_cast<std::size_t>(params.decoder_weight.rows()) != pool.size())
    throw PoolMismatch("router has " + std::to_string(params.decoder_weight.rows()) +
                       " outputs but the pool has " + std::to_string(pool.size()) + " models");
  const Encoding enc = encode(params, embedding);
  const Eigen::VectorXd probs = decode(params, expected_latent(enc, mode));

  RoutingDecision out;
  out.probs.assign(probs.data(), probs.data() + probs.size());
  out.chosen = choose_model(out.probs, pool);
  for (std::size_t t = 0; t < pool.size(); ++t) out.expected_unit_cost += out.probs[t] * unit_cost(pool[t]);
  out.mask_rate = enc.mask.mean_rate();
  return out;
}

std::size_t choose_model(std::span<const double> probs, const ModelPool& pool) {
  if (probs.size() != pool.size()) throw DimensionMismatch(pool.size(), probs.size(), "routing probabilities");
  const double best = *std::max_element(probs.begin(), probs.end());
  std::size_t chosen = pool.size();
  for (std::size_t t = 0; t < probs.size(); ++t) {
    if (probs[t] < best - 1e-12) continue;
    if (chosen == pool.size() || unit_cost(pool[t]) < unit_cost(pool[chosen])) chosen = t;
  }
  return chosen;
}

double mask_kl(const MaskDistribution& mask, double prior_pi) {
  if (!(prior_pi > 0.0 && prior_pi < 1.0)) throw std::invalid_argument("mask_kl: prior must be in (0,1)");
  const double log_pi = std::log(prior_pi);
  const double log_1m_pi = std::log1p(-prior_pi);
  double kl = 0.0;
  for (Eigen::Index j = 0; j < mask.probs.size(); ++j) {
    const double p = clamp_rate(mask.probs[j]);
    kl += p * (std::log(p) - log_pi) + (1.0 - p) * (std::log1p(-p) - log_1m_pi);
  }
  return std::max(kl, 0.0);
}

}  // namespace webrouter
