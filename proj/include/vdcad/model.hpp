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
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "vdcad/cad_core.hpp"
#include "vdcad/nn/graph.hpp"
#include "vdcad/nn/params.hpp"
#include "vdcad/svg_core.hpp"

namespace vdcad {

enum class ViewMode { kIso, kOrtho, kAll };
enum class Fusion { kConcat, kAdd };

std::string_view to_string(ViewMode mode);
ViewMode parse_view_mode(std::string_view name);  // "iso", "ortho", "all"
std::string_view to_string(Fusion fusion);
Fusion parse_fusion(std::string_view name);  // "concat", "add"

// Views consumed by a mode, in stacking order.
std::vector<ViewLabel> views_for(ViewMode mode);

struct ModelConfig {
  int d_embed = 256;
  int blocks = 4;
  int heads = 8;
  int ff_dim = 512;
  double dropout = 0.1;
  ViewMode view_mode = ViewMode::kAll;
  int seq_len = static_cast<int>(kDrawingLength);
  int cad_len = static_cast<int>(kDefaultCadLength);
  Fusion fusion = Fusion::kConcat;
  bool guidance = true;

  void validate() const;  // throws ContractError
  int view_count() const { return static_cast<int>(views_for(view_mode).size()); }
};

// Sinusoidal encoding: even dims sin(i / 10000^(2k/d)), odd dims cos.
Eigen::RowVectorXd positional_encoding(int position, int width);

// Integer inputs for a batch of samples, row-major over (sample, position).
struct TokenBatch {
  Eigen::Index batch = 0;
  Eigen::Index length = 0;      // tokens per sample over all views
  std::vector<int> views;       // batch * length
  std::vector<int> kinds;       // batch * length
  std::vector<int> params;      // batch * length * 8
};

// Each sample lists its drawings in the mode's stacking order. Throws
// ContractError on a wrong view count, order or sequence length.
TokenBatch make_token_batch(std::span<const std::vector<DrawingSequence>> samples, const ModelConfig& config);

class Model {
 public:
  struct Outputs {
    nn::Graph::Id cmd_logits;  // (batch * cad_len) x 6
    nn::Graph::Id arg_logits;  // (batch * cad_len * 15) x 257
    nn::Graph::Id latent;      // batch x d_embed
  };

  // Weights drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)); embedding tables
  // and decoder queries from U(-1, 1); layer norms start at identity.
  Model(ModelConfig config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // `rng` enables dropout; nullptr is evaluation mode.
  Outputs forward(nn::Graph& g, const TokenBatch& batch, std::mt19937_64* rng) const;

  nn::Graph::Id embed(nn::Graph& g, const TokenBatch& batch) const;
  nn::Graph::Id encode(nn::Graph& g, nn::Graph::Id embeddings, Eigen::Index length, std::mt19937_64* rng) const;
  std::pair<nn::Graph::Id, nn::Graph::Id> decode(nn::Graph& g, nn::Graph::Id latent, std::mt19937_64* rng) const;

  // Evaluation-mode conveniences for a single sample.
  Eigen::RowVectorXd embed_token(const SvgToken& token, ViewLabel view, int position) const;
  nn::Mat embed_drawing(std::span<const DrawingSequence> views) const;
  Eigen::RowVectorXd encode(const nn::Mat& embeddings) const;
  std::pair<nn::Mat, nn::Mat> decode(const Eigen::RowVectorXd& latent) const;

 private:
  nn::Graph::Id param(nn::Graph& g, const std::string& name) const;
  // Fused field embeddings without the positional term.
  nn::Graph::Id fuse_fields(nn::Graph& g, const TokenBatch& batch) const;
  nn::Graph::Id layer_norm(nn::Graph& g, nn::Graph::Id x, const std::string& prefix) const;
  nn::Graph::Id attention(nn::Graph& g, nn::Graph::Id x, nn::Graph::Id memory, Eigen::Index q_len,
                          Eigen::Index k_len, const std::string& prefix) const;
  nn::Graph::Id feed_forward(nn::Graph& g, nn::Graph::Id x, const std::string& prefix) const;
  nn::Graph::Id decoder_stack(nn::Graph& g, nn::Graph::Id latent, const std::string& prefix,
                              std::mt19937_64* rng) const;
  nn::Graph::Id dropout(nn::Graph& g, nn::Graph::Id x, std::mt19937_64* rng) const;

  void add_linear(const std::string& prefix, int in, int out, bool bias, std::mt19937_64& rng);
  void add_layer_norm(const std::string& prefix);
  void add_attention(const std::string& prefix, std::mt19937_64& rng);
  void add_feed_forward(const std::string& prefix, std::mt19937_64& rng);

  ModelConfig config_;
  // Graph leaves need a gradient sink even in evaluation-mode calls.
  mutable nn::ParamStore params_;
};

// Argument-decoder hidden states after command guidance.
nn::Graph::Id apply_guidance(nn::Graph& g, nn::Graph::Id h_arg, nn::Graph::Id h_cmd, bool enabled);

// Greedy decoding for one sample: cmd_logits N_c x 6, arg_logits
// (N_c * 15) x 257. Ties resolve to the lowest index.
CadSequence predict(const nn::Mat& cmd_logits, const nn::Mat& arg_logits);

}  // namespace vdcad
