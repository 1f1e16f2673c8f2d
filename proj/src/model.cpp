/*
Copyright 2026 The vdcad Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include "vdcad/model.hpp"

#include <cmath>
#include <string>

#include "vdcad/errors.hpp"

namespace vdcad {

using nn::Graph;
using nn::Mat;

std::string_view to_string(ViewMode mode) {
  switch (mode) {
    case ViewMode::kIso: return "iso";
    case ViewMode::kOrtho: return "ortho";
    case ViewMode::kAll: return "all";
  }
  return "?";
}

ViewMode parse_view_mode(std::string_view name) {
  if (name == "iso" || name == "1x") return ViewMode::kIso;
  if (name == "ortho" || name == "3x") return ViewMode::kOrtho;
  if (name == "all" || name == "4x") return ViewMode::kAll;
  throw ContractError("unknown view mode: " + std::string(name));
}

std::string_view to_string(Fusion fusion) { return fusion == Fusion::kConcat ? "concat" : "add"; }

Fusion parse_fusion(std::string_view name) {
  if (name == "concat") return Fusion::kConcat;
  if (name == "add") return Fusion::kAdd;
  throw ContractError("unknown fusion: " + std::string(name));
}

std::vector<ViewLabel> views_for(ViewMode mode) {
  switch (mode) {
    case ViewMode::kIso: return {ViewLabel::kIsometric};
    case ViewMode::kOrtho: return {ViewLabel::kFront, ViewLabel::kTop, ViewLabel::kRight};
    case ViewMode::kAll: return {ViewLabel::kFront, ViewLabel::kTop, ViewLabel::kRight, ViewLabel::kIsometric};
  }
  return {};
}

void ModelConfig::validate() const {
  if (d_embed < 1 || blocks < 1 || heads < 1 || ff_dim < 1 || seq_len < 1 || cad_len < 1) {
    throw ContractError("model config: all counts must be >= 1");
  }
  if (d_embed % heads != 0) throw ContractError("model config: d_embed must be divisible by heads");
  if (dropout < 0.0 || dropout >= 1.0) throw ContractError("model config: dropout must lie in [0, 1)");
}

Eigen::RowVectorXd positional_encoding(int position, int width) {
  if (position < 0) throw ContractError("positional_encoding: negative position");
  Eigen::RowVectorXd pe(width);
  for (int j = 0; j < width; ++j) {
    const int k = j / 2;
    const double angle = position / std::pow(10000.0, 2.0 * k / width);
    pe[j] = j % 2 == 0 ? std::sin(angle) : std::cos(angle);
  }
  return pe;
}

TokenBatch make_token_batch(std::span<const std::vector<DrawingSequence>> samples, const ModelConfig& config) {
  const auto order = views_for(config.view_mode);
  TokenBatch b;
  b.batch = static_cast<Eigen::Index>(samples.size());
  b.length = static_cast<Eigen::Index>(order.size()) * config.seq_len;
  const auto tokens = static_cast<std::size_t>(b.batch * b.length);
  b.views.reserve(tokens);
  b.kinds.reserve(tokens);
  b.params.reserve(tokens * kSvgParamCount);
  for (const auto& views : samples) {
    if (views.size() != order.size()) {
      throw ContractError("expected " + std::to_string(order.size()) + " views, got " + std::to_string(views.size()));
    }
    for (std::size_t v = 0; v < order.size(); ++v) {
      if (views[v].view != order[v]) {
        throw ContractError("view " + std::to_string(v) + " must be " + std::string(to_string(order[v])));
      }
      if (views[v].tokens.size() != static_cast<std::size_t>(config.seq_len)) {
        throw ContractError("drawing length must be " + std::to_string(config.seq_len));
      }
      for (const auto& t : views[v].tokens) {
        b.views.push_back(static_cast<int>(views[v].view));
        b.kinds.push_back(static_cast<int>(t.kind));
        for (int p : t.params) {
          if (p < 0 || p >= kNumCategories) throw ContractError("token parameter out of one-hot range");
          b.params.push_back(p);
        }
      }
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Construction

void Model::add_linear(const std::string& prefix, int in, int out, bool bias, std::mt19937_64& rng) {
  nn::fill_uniform(params_.add(prefix + ".w", in, out).value, 1.0 / std::sqrt(static_cast<double>(in)), rng);
  if (bias) params_.add(prefix + ".b", 1, out);
}

void Model::add_layer_norm(const std::string& prefix) {
  params_.add(prefix + ".gamma", 1, config_.d_embed).value.setOnes();
  params_.add(prefix + ".beta", 1, config_.d_embed);
}

void Model::add_attention(const std::string& prefix, std::mt19937_64& rng) {
  for (const char* p : {".q", ".k", ".v", ".o"}) add_linear(prefix + p, config_.d_embed, config_.d_embed, true, rng);
}

void Model::add_feed_forward(const std::string& prefix, std::mt19937_64& rng) {
  add_linear(prefix + ".fc1", config_.d_embed, config_.ff_dim, true, rng);
  add_linear(prefix + ".fc2", config_.ff_dim, config_.d_embed, true, rng);
}

Model::Model(ModelConfig config, std::uint64_t seed) : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  const int d = config_.d_embed;
  const bool with_view = config_.view_mode != ViewMode::kIso;
  if (with_view) nn::fill_uniform(params_.add("embed.view", 4, d).value, 1.0, rng);
  nn::fill_uniform(params_.add("embed.cmd", 4, d).value, 1.0, rng);
  nn::fill_uniform(params_.add("embed.param_b", kNumCategories, d).value, 1.0, rng);
  add_linear("embed.param_a", static_cast<int>(kSvgParamCount) * d, d, false, rng);
  if (config_.fusion == Fusion::kConcat) add_linear("embed.fusion", (with_view ? 3 : 2) * d, d, true, rng);

  for (int i = 0; i < config_.blocks; ++i) {
    const std::string p = "enc." + std::to_string(i);
    add_layer_norm(p + ".ln1");
    add_attention(p + ".attn", rng);
    add_layer_norm(p + ".ln2");
    add_feed_forward(p + ".ff", rng);
  }
  add_layer_norm("enc.ln");

  for (const std::string dec : {"dec_cmd", "dec_arg"}) {
    nn::fill_uniform(params_.add(dec + ".query", config_.cad_len, d).value, 1.0, rng);
    for (int i = 0; i < config_.blocks; ++i) {
      const std::string p = dec + "." + std::to_string(i);
      add_layer_norm(p + ".ln1");
      add_attention(p + ".self", rng);
      add_layer_norm(p + ".ln2");
      add_attention(p + ".cross", rng);
      add_layer_norm(p + ".ln3");
      add_feed_forward(p + ".ff", rng);
    }
    add_layer_norm(dec + ".ln");
  }
  add_linear("head.cmd", d, kNumCadKinds, true, rng);
  add_linear("head.arg", d, static_cast<int>(kCadParamCount) * kNumCategories, true, rng);
}

// ---------------------------------------------------------------------------
// Forward pass

Graph::Id Model::param(Graph& g, const std::string& name) const { return g.param(params_.get(name)); }

Graph::Id Model::dropout(Graph& g, Graph::Id x, std::mt19937_64* rng) const {
  return rng != nullptr ? g.dropout(x, config_.dropout, *rng) : x;
}

Graph::Id Model::layer_norm(Graph& g, Graph::Id x, const std::string& prefix) const {
  return g.layer_norm(x, param(g, prefix + ".gamma"), param(g, prefix + ".beta"));
}

Graph::Id Model::attention(Graph& g, Graph::Id x, Graph::Id memory, Eigen::Index q_len, Eigen::Index k_len,
                           const std::string& prefix) const {
  auto proj = [&](Graph::Id in, const char* p) {
    return g.linear(in, param(g, prefix + p + ".w"), param(g, prefix + p + ".b"));
  };
  const Graph::Id q = proj(x, ".q");
  const Graph::Id k = proj(memory, ".k");
  const Graph::Id v = proj(memory, ".v");
  const Graph::Id a = g.attention(q, k, v, config_.heads, q_len, k_len);
  return proj(a, ".o");
}

Graph::Id Model::feed_forward(Graph& g, Graph::Id x, const std::string& prefix) const {
  const Graph::Id h = g.gelu(g.linear(x, param(g, prefix + ".fc1.w"), param(g, prefix + ".fc1.b")));
  return g.linear(h, param(g, prefix + ".fc2.w"), param(g, prefix + ".fc2.b"));
}

Graph::Id Model::fuse_fields(Graph& g, const TokenBatch& batch) const {
  const int d = config_.d_embed;
  std::vector<Graph::Id> fields;
  if (config_.view_mode != ViewMode::kIso) fields.push_back(g.gather_rows(param(g, "embed.view"), batch.views));
  fields.push_back(g.gather_rows(param(g, "embed.cmd"), batch.kinds));
  const Graph::Id slots = g.gather_rows(param(g, "embed.param_b"), batch.params);
  const Graph::Id flat = g.reshape(slots, batch.batch * batch.length, static_cast<Eigen::Index>(kSvgParamCount) * d);
  fields.push_back(g.matmul(flat, param(g, "embed.param_a.w")));
  if (config_.fusion == Fusion::kConcat) {
    return g.linear(g.concat_cols(fields), param(g, "embed.fusion.w"), param(g, "embed.fusion.b"));
  }
  Graph::Id sum = fields.front();
  for (std::size_t i = 1; i < fields.size(); ++i) sum = g.add(sum, fields[i]);
  return sum;
}

Graph::Id Model::embed(Graph& g, const TokenBatch& batch) const {
  const int d = config_.d_embed;
  if (batch.length != static_cast<Eigen::Index>(config_.view_count()) * config_.seq_len) {
    throw ContractError("token batch does not match the view mode");
  }
  Mat pe(batch.batch * batch.length, d);
  for (Eigen::Index i = 0; i < batch.length; ++i) {
    const Eigen::RowVectorXd row = positional_encoding(static_cast<int>(i), d);
    for (Eigen::Index b = 0; b < batch.batch; ++b) pe.row(b * batch.length + i) = row;
  }
  return g.add(fuse_fields(g, batch), g.constant(std::move(pe)));
}

Graph::Id Model::encode(Graph& g, Graph::Id embeddings, Eigen::Index length, std::mt19937_64* rng) const {
  Graph::Id x = dropout(g, embeddings, rng);
  for (int i = 0; i < config_.blocks; ++i) {
    const std::string p = "enc." + std::to_string(i);
    const Graph::Id h = layer_norm(g, x, p + ".ln1");
    x = g.add(x, dropout(g, attention(g, h, h, length, length, p + ".attn"), rng));
    x = g.add(x, dropout(g, feed_forward(g, layer_norm(g, x, p + ".ln2"), p + ".ff"), rng));
  }
  return g.segment_mean(layer_norm(g, x, "enc.ln"), length);
}

Graph::Id Model::decoder_stack(Graph& g, Graph::Id latent, const std::string& prefix, std::mt19937_64* rng) const {
  const Eigen::Index batch = g.value(latent).rows();
  const Eigen::Index n = config_.cad_len;
  Graph::Id x = g.tile_rows(param(g, prefix + ".query"), batch);
  for (int i = 0; i < config_.blocks; ++i) {
    const std::string p = prefix + "." + std::to_string(i);
    const Graph::Id h = layer_norm(g, x, p + ".ln1");
    x = g.add(x, dropout(g, attention(g, h, h, n, n, p + ".self"), rng));
    x = g.add(x, dropout(g, attention(g, layer_norm(g, x, p + ".ln2"), latent, n, 1, p + ".cross"), rng));
    x = g.add(x, dropout(g, feed_forward(g, layer_norm(g, x, p + ".ln3"), p + ".ff"), rng));
  }
  return layer_norm(g, x, prefix + ".ln");
}

Graph::Id apply_guidance(Graph& g, Graph::Id h_arg, Graph::Id h_cmd, bool enabled) {
  return enabled ? g.add(h_arg, h_cmd) : h_arg;
}

std::pair<Graph::Id, Graph::Id> Model::decode(Graph& g, Graph::Id latent, std::mt19937_64* rng) const {
  const Graph::Id h_cmd = decoder_stack(g, latent, "dec_cmd", rng);
  const Graph::Id h_arg = apply_guidance(g, decoder_stack(g, latent, "dec_arg", rng), h_cmd, config_.guidance);
  const Graph::Id cmd = g.linear(h_cmd, param(g, "head.cmd.w"), param(g, "head.cmd.b"));
  const Graph::Id arg = g.linear(h_arg, param(g, "head.arg.w"), param(g, "head.arg.b"));
  const Eigen::Index rows = g.value(arg).rows() * static_cast<Eigen::Index>(kCadParamCount);
  return {cmd, g.reshape(arg, rows, kNumCategories)};
}

Model::Outputs Model::forward(Graph& g, const TokenBatch& batch, std::mt19937_64* rng) const {
  const Graph::Id z = encode(g, embed(g, batch), batch.length, rng);
  const auto [cmd, arg] = decode(g, z, rng);
  return {cmd, arg, z};
}

Eigen::RowVectorXd Model::embed_token(const SvgToken& token, ViewLabel view, int position) const {
  if (position < 0) throw ContractError("embed_token: negative position");
  TokenBatch b;
  b.batch = 1;
  b.length = 1;
  b.views = {static_cast<int>(view)};
  b.kinds = {static_cast<int>(token.kind)};
  for (int p : token.params) {
    if (p < 0 || p >= kNumCategories) throw ContractError("embed_token: parameter out of one-hot range");
    b.params.push_back(p);
  }
  Graph g;
  return g.value(fuse_fields(g, b)).row(0) + positional_encoding(position, config_.d_embed);
}

Mat Model::embed_drawing(std::span<const DrawingSequence> views) const {
  const std::vector<DrawingSequence> sample(views.begin(), views.end());
  const TokenBatch batch = make_token_batch(std::span(&sample, 1), config_);
  Graph g;
  return g.value(embed(g, batch));
}

Eigen::RowVectorXd Model::encode(const Mat& embeddings) const {
  if (embeddings.cols() != config_.d_embed || embeddings.rows() < 1) throw ContractError("encode: bad shape");
  Graph g;
  return g.value(encode(g, g.constant(embeddings), embeddings.rows(), nullptr)).row(0);
}

std::pair<Mat, Mat> Model::decode(const Eigen::RowVectorXd& latent) const {
  if (latent.size() != config_.d_embed || !latent.allFinite()) throw ContractError("decode: bad latent");
  Graph g;
  const auto [cmd, arg] = decode(g, g.constant(Mat(latent)), nullptr);
  return {g.value(cmd), g.value(arg)};
}

CadSequence predict(const Mat& cmd_logits, const Mat& arg_logits) {
  const Eigen::Index n = cmd_logits.rows();
  if (cmd_logits.cols() != kNumCadKinds || arg_logits.cols() != kNumCategories ||
      arg_logits.rows() != n * static_cast<Eigen::Index>(kCadParamCount)) {
    throw ContractError("predict: logits shapes do not match");
  }
  auto argmax = [](const auto& row) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < row.size(); ++k) {
      if (row[k] > row[best]) best = k;
    }
    return static_cast<int>(best);
  };
  std::vector<CadKind> kinds;
  std::vector<CadParams> args;
  for (Eigen::Index i = 0; i < n; ++i) {
    kinds.push_back(static_cast<CadKind>(argmax(cmd_logits.row(i))));
    CadParams p{};
    for (std::size_t j = 0; j < kCadParamCount; ++j) {
      p[j] = argmax(arg_logits.row(i * static_cast<Eigen::Index>(kCadParamCount) + static_cast<Eigen::Index>(j)));
    }
    args.push_back(p);
  }
  return merge_outputs(kinds, args);
}

}  // namespace vdcad
