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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "vdcad/cad_core.hpp"
#include "vdcad/geom_kernel.hpp"
#include "vdcad/nn/graph.hpp"

namespace vdcad {

inline constexpr double kDefaultAlpha = 2.0;
inline constexpr int kDefaultTolerance = 3;
inline constexpr double kDefaultBeta = 2.0;
inline constexpr int kDefaultEta = 3;

struct SoftTarget {
  std::array<double, kNumCategories> p{};
};

// Exponentially smoothed target around category y, clipped to [0, 255] and
// renormalized. y == kUnusedBin gives a hard one-hot.
SoftTarget soft_target(int y, double alpha = kDefaultAlpha, int tol = kDefaultTolerance);
nn::SparseTarget sparse_soft_target(int y, double alpha = kDefaultAlpha, int tol = kDefaultTolerance);

// Row targets in the layout used by the model heads: one row per position for
// kinds, one row per (position, slot) for arguments. With `mask_unused` the
// rows of unused slots get an empty target and drop out of the loss.
std::vector<nn::SparseTarget> command_targets(const CadSequence& gt, std::size_t length);
std::vector<nn::SparseTarget> argument_targets(const CadSequence& gt, std::size_t length,
                                               double alpha = kDefaultAlpha, int tol = kDefaultTolerance,
                                               bool mask_unused = false);

// cmd_logits: N_c x 6. Mean cross-entropy over positions.
double cmd_loss(const nn::Mat& cmd_logits, const CadSequence& gt);
// arg_logits: (N_c * 15) x 257. Normalized by N_c * 15.
double args_loss(const nn::Mat& arg_logits, const CadSequence& gt, double alpha = kDefaultAlpha,
                 int tol = kDefaultTolerance, bool mask_unused = false);
double total_loss(double cmd, double args, double beta = kDefaultBeta);

double acc_cmd(const CadSequence& pred, const CadSequence& gt);
// Empty when no used slot of a correctly predicted command exists.
std::optional<double> acc_param(const CadSequence& pred, const CadSequence& gt, int eta = kDefaultEta);

double chamfer(std::span<const Vec3> a, std::span<const Vec3> b);

// Maps the box [lo, hi] into the unit cube around the origin: centers it and
// divides by its largest side.
struct UnitTransform {
  Vec3 center = Vec3::Zero();
  double scale = 1.0;

  static UnitTransform from_bounds(const Vec3& lo, const Vec3& hi);
  std::vector<Vec3> apply(std::span<const Vec3> pts) const;
};

// Unscaled fractions; export scales them.
struct MetricsReport {
  double acc_cmd = 0.0;
  double acc_param = 0.0;
  double ir = 0.0;
  double mcd = 0.0;
  std::size_t total = 0;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  std::size_t acc_param_count = 0;  // pairs where acc_param applies
  std::size_t mcd_count = 0;        // pairs where both shapes sampled
};

MetricsReport evaluate_set(std::span<const CadSequence> preds, std::span<const CadSequence> gts,
                           std::size_t sample_count = kDefaultSampleCount, std::uint64_t seed = 0);

// key = value lines; accuracies and ir are x100, mcd is x10^2.
void write_report(std::ostream& out, const MetricsReport& report);

}  // namespace vdcad
