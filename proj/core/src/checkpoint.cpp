// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "webrouter/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "webrouter/error.hpp"

namespace webrouter {

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'R', 'C', 'K', 'P', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

void write_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) throw Error("checkpoint truncated");
  return v;
}

// Row-major write of a column-major Eigen object.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

void read_matrix(std::istream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = 0.0;
      if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) throw Error("checkpoint truncated in weights");
      m(i, j) = v;
    }
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_vector(std::istream& in, Eigen::VectorXd& v) {
  if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double))))
    throw Error("checkpoint truncated in weights");
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  const RouterParams& p = checkpoint.params;
  p.validate();
  const RouterDims dims = p.dims();
  if (checkpoint.model_ids.size() != dims.models)
    throw Error("checkpoint model_ids do not match the router's output count");

  nlohmann::json header;
  header["format"] = "webrouter-checkpoint";
  header["format_version"] = Checkpoint::kFormatVersion;
  header["dims"] = {{"d", dims.input}, {"h", dims.hidden}, {"T", dims.models}};
  header["prior_pi"] = p.prior_pi;
  header["temperature"] = p.temperature;
  header["encoder"] = p.encoder == EncoderKind::kTanh ? "tanh" : "identity";
  header["normalize_inputs"] = checkpoint.normalize_inputs;
  header["model_ids"] = checkpoint.model_ids;
  nlohmann::json layout = nlohmann::json::array();
  const auto blocks = p.blocks();
  const std::array<std::pair<Eigen::Index, Eigen::Index>, 6> shapes = {{
      {p.encoder_weight.rows(), p.encoder_weight.cols()},
      {p.encoder_bias.size(), 1},
      {p.mask_weight.rows(), p.mask_weight.cols()},
      {p.mask_bias.size(), 1},
      {p.decoder_weight.rows(), p.decoder_weight.cols()},
      {p.decoder_bias.size(), 1},
  }};
  for (std::size_t b = 0; b < blocks.size(); ++b)
    layout.push_back({{"name", RouterWeights::kBlockNames[b]}, {"rows", shapes[b].first}, {"cols", shapes[b].second}});
  header["blocks"] = std::move(layout);
  header["byte_order"] = "little";
  header["element"] = "float64";
  header["matrix_order"] = "row_major";

  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  write_matrix(out, p.encoder_weight);
  write_vector(out, p.encoder_bias);
  write_matrix(out, p.mask_weight);
  write_vector(out, p.mask_bias);
  write_matrix(out, p.decoder_weight);
  write_vector(out, p.decoder_bias);
  if (!out) throw Error("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw Error("not a webrouter checkpoint");
  const std::uint64_t header_len = read_u64(in);
  if (header_len > (1u << 26)) throw Error("checkpoint header is implausibly large");
  std::string text(header_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_len))) throw Error("checkpoint truncated in header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("checkpoint header is not valid JSON: ") + e.what());
  }

  Checkpoint ck;
  try {
    if (header.at("format_version").get<int>() != Checkpoint::kFormatVersion)
      throw Error("unsupported checkpoint format_version " + header.at("format_version").dump());
    const auto d = header.at("dims").at("d").get<Eigen::Index>();
    const auto h = header.at("dims").at("h").get<Eigen::Index>();
    const auto T = header.at("dims").at("T").get<Eigen::Index>();
    if (d <= 0 || h <= 0 || T < 2) throw Error("checkpoint has invalid dimensions");
    RouterParams& p = ck.params;
    p.prior_pi = header.at("prior_pi").get<double>();
    p.temperature = header.at("temperature").get<double>();
    const auto encoder = header.at("encoder").get<std::string>();
    if (encoder == "tanh") {
      p.encoder = EncoderKind::kTanh;
      p.encoder_weight.resize(h, d);
      p.encoder_bias.resize(h);
    } else if (encoder == "identity") {
      p.encoder = EncoderKind::kIdentity;
      if (d != h) throw Error("identity-encoder checkpoint must have d == h");
      p.encoder_weight.resize(0, 0);
      p.encoder_bias.resize(0);
    } else {
      throw Error("unknown encoder kind '" + encoder + "'");
    }
    p.mask_weight.resize(h, h);
    p.mask_bias.resize(h);
    p.decoder_weight.resize(T, h);
    p.decoder_bias.resize(T);
    ck.normalize_inputs = header.at("normalize_inputs").get<bool>();
    ck.model_ids = header.at("model_ids").get<std::vector<std::string>>();
    if (static_cast<Eigen::Index>(ck.model_ids.size()) != T) throw Error("checkpoint model_ids length differs from T");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("checkpoint header is malformed: ") + e.what());
  }

  RouterParams& p = ck.params;
  read_matrix(in, p.encoder_weight);
  read_vector(in, p.encoder_bias);
  read_matrix(in, p.mask_weight);
  read_vector(in, p.mask_bias);
  read_matrix(in, p.decoder_weight);
  read_vector(in, p.decoder_bias);
  if (in.peek() != std::char_traits<char>::eof()) throw Error("checkpoint has trailing bytes");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("checkpoint is invalid: ") + e.what());
  }
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

void verify_pool(const Checkpoint& checkpoint, const ModelPool& pool) {
  const auto ids = pool.model_ids();
  if (ids == checkpoint.model_ids) return;
  auto join = [](const std::vector<std::string>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s + "]";
  };
  throw PoolMismatch("checkpoint was trained on models " + join(checkpoint.model_ids) +
                     " but the pool config lists " + join(ids));
}

}  // namespace webrouter
