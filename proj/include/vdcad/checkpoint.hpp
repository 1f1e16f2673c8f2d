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

#include <string>
#include <vector>

#include "vdcad/nn/graph.hpp"

namespace vdcad {

enum class TensorType : std::uint8_t { kF32 = 0, kF64 = 1 };

struct NamedTensor {
  std::string name;
  nn::Mat value;
};

// Versioned little-endian container: magic, version, config text, then named
// rank-2 tensors with their element type and shape.
struct Checkpoint {
  std::string config_text;
  std::vector<NamedTensor> tensors;

  const NamedTensor* find(const std::string& name) const;
};

void write_checkpoint(const std::string& path, const Checkpoint& ckpt, TensorType type);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace vdcad
