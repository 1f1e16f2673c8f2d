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

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdcad/config.hpp"
#include "vdcad/dataset.hpp"
#include "vdcad/errors.hpp"
#include "vdcad/loss_metrics.hpp"
#include "vdcad/model.hpp"

namespace vdcad {

// Training stopped on a non-finite loss.
class TrainingError : public Error {
 public:
  TrainingError(long step, std::string last_checkpoint)
      : Error("non-finite loss at step " + std::to_string(step) +
              (last_checkpoint.empty() ? "" : "; last good checkpoint: " + last_checkpoint)),
        step_(step),
        last_checkpoint_(std::move(last_checkpoint)) {}
  long step() const { return step_; }
  const std::string& last_checkpoint() const { return last_checkpoint_; }

 private:
  long step_;
  std::string last_checkpoint_;
};

struct DatasetSplit {
  std::vector<Record> train;
  std::vector<Record> val;
  std::vector<Record> test;
};

// Seeded shuffle, then contiguous slices of floor(ratio * n); the remainder
// goes to the first split.
DatasetSplit split_dataset(std::vector<Record> records, const std::array<double, 3>& ratios, std::uint64_t seed);

// Linear warmup on 1-based steps: lr * min(1, step / warmup).
double learning_rate(const TrainConfig& config, long step);

// The drawings a model consumes from a record, in stacking order.
std::vector<DrawingSequence> model_views(const Record& record, ViewMode mode);

struct StepStats {
  long step = 0;  // 1-based index of the completed step
  int epoch = 0;
  double loss = 0.0;
  double cmd_loss = 0.0;
  double args_loss = 0.0;
  double grad_norm = 0.0;     // before clipping
  double clipped_norm = 0.0;  // after clipping
  double lr = 0.0;
};

// Deterministic Adam trainer. Batch order depends on (seed, epoch) and dropout
// on (seed, step), so weights, moments and the step counter are the whole
// resumable state.
class Trainer {
 public:
  Trainer(RunConfig config, std::vector<Record> data);

  const RunConfig& config() const { return config_; }
  Model& model() { return model_; }
  const Model& model() const { return model_; }
  long steps_done() const { return step_; }
  long steps_per_epoch() const;
  long total_steps() const;

  StepStats step();

  // Full training state at 64-bit precision.
  void save_state(const std::string& path) const;
  void load_state(const std::string& path);

 private:
  std::vector<std::size_t> epoch_order(int epoch) const;

  RunConfig config_;
  std::vector<Record> data_;
  std::vector<std::vector<DrawingSequence>> inputs_;
  std::vector<std::vector<nn::SparseTarget>> cmd_targets_;
  std::vector<std::vector<nn::SparseTarget>> arg_targets_;
  Model model_;
  std::map<std::string, nn::Mat> adam_m_;
  std::map<std::string, nn::Mat> adam_v_;
  long step_ = 0;
  mutable int cached_epoch_ = -1;
  mutable std::vector<std::size_t> cached_order_;
};

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  std::optional<MetricsReport> validation;
};

// Append-only record of a training run.
struct RunManifest {
  std::string config_text;
  std::uint64_t dataset_fingerprint = 0;
  std::vector<EpochRecord> epochs;
  std::vector<std::string> checkpoints;

  void write(std::ostream& out) const;
};

// Model-only checkpoint with 32-bit weights.
void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

// Greedy predictions in evaluation mode, batched.
std::vector<CadSequence> infer(const Model& model, std::span<const std::vector<DrawingSequence>> samples,
                               std::size_t batch_size = 32);
MetricsReport evaluate(const Model& model, std::span<const Record> records, std::size_t sample_count,
                       std::uint64_t seed);

struct TrainOptions {
  std::string out_dir;
  std::vector<Record> validation;
  std::function<void(const StepStats&)> on_step;
};

// Runs the configured epochs (or max_steps), writing periodic checkpoints,
// model.ckpt, state.ckpt and manifest.txt into out_dir.
RunManifest train(const RunConfig& config, std::vector<Record> data, const TrainOptions& options);

}  // namespace vdcad
