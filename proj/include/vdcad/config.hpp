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
#include <string>
#include <string_view>

#include "vdcad/model.hpp"

namespace vdcad {

struct TrainConfig {
  double lr = 1e-3;
  int warmup_steps = 2000;
  double clip = 1.0;
  int batch_size = 256;
  int epochs = 200;
  long max_steps = 0;  // 0: run all epochs
  int checkpoint_every = 10;  // epochs; 0 disables intermediate checkpoints
  std::uint64_t seed = 0;
  double beta = 2.0;
  double alpha = 2.0;
  int tolerance = 3;
  bool mask_unused = false;  // drop unused slots from the argument loss
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int eval_samples = 2000;

  void validate() const;
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

RunConfig full_profile();
// Small enough for a laptop CPU: d_embed 64, 2 blocks, 4 heads, batch 32.
RunConfig desk_profile();

// Sets one `key = value` entry; keys are the field names of ModelConfig and
// TrainConfig. Throws InputError for unknown keys or malformed values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat `key = value` text with `#` comments. A `profile = desk|full` entry
// selects the base before the other keys apply.
RunConfig parse_config_text(std::string_view text, const RunConfig& base = full_profile());
RunConfig load_config_file(const std::string& path, const RunConfig& base = full_profile());
std::string format_config(const RunConfig& config);

// Replaces every seed with D2C_SEED when it is set.
void apply_seed_override(RunConfig& config);
std::uint64_t seed_override(std::uint64_t fallback);

}  // namespace vdcad
