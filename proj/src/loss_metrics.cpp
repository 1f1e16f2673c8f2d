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
#include "vdcad/loss_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "vdcad/errors.hpp"
#include "vdcad/random.hpp"

namespace vdcad {

SoftTarget soft_target(int y, double alpha, int tol) {
  if (y < 0 || y >= kNumCategories) throw ContractError("soft_target: category out of range");
  if (alpha <= 0.0 || tol < 0) throw ContractError("soft_target: need alpha > 0 and tol >= 0");
  SoftTarget t;
  for (const auto& [k, w] : sparse_soft_target(y, alpha, tol)) t.p[static_cast<std::size_t>(k)] = w;
  return t;
}

nn::SparseTarget sparse_soft_target(int y, double alpha, int tol) {
  if (y == kUnusedBin) return {{kUnusedBin, 1.0}};
  const int lo = std::max(0, y - tol);
  const int hi = std::min(kNumBins - 1, y + tol);
  nn::SparseTarget t;
  double z = 0.0;
  for (int k = lo; k <= hi; ++k) {
    const double w = std::exp(-alpha * std::abs(k - y));
    t.emplace_back(k, w);
    z += w;
  }
  for (auto& [k, w] : t) w /= z;
  return t;
}

namespace {

const CadCommand& command_at(const CadSequence& seq, std::size_t i) {
  static const CadCommand eos{};
  return i < seq.commands.size() ? seq.commands[i] : eos;
}

double row_cross_entropy(const nn::Mat& logits, Eigen::Index r, const nn::SparseTarget& target) {
  const double m = logits.row(r).maxCoeff();
  const double lse = m + std::log((logits.row(r).array() - m).exp().sum());
  double loss = 0.0;
  for (const auto& [k, t] : target) loss -= t * (logits(r, k) - lse);
  return loss;
}

}  // namespace

std::vector<nn::SparseTarget> command_targets(const CadSequence& gt, std::size_t length) {
  std::vector<nn::SparseTarget> rows;
  rows.reserve(length);
  for (std::size_t i = 0; i < length; ++i) rows.push_back({{static_cast<int>(command_at(gt, i).kind), 1.0}});
  return rows;
}

std::vector<nn::SparseTarget> argument_targets(const CadSequence& gt, std::size_t length, double alpha, int tol,
                                               bool mask_unused) {
  std::vector<nn::SparseTarget> rows;
  rows.reserve(length * kCadParamCount);
  for (std::size_t i = 0; i < length; ++i) {
    for (int bin : command_at(gt, i).params) {
      if (mask_unused && bin == kUnusedBin) rows.emplace_back();
      else rows.push_back(sparse_soft_target(bin, alpha, tol));
    }
  }
  return rows;
}

double cmd_loss(const nn::Mat& cmd_logits, const CadSequence& gt) {
  if (cmd_logits.cols() != kNumCadKinds) throw ContractError("cmd_loss: expected 6 columns");
  const auto targets = command_targets(gt, static_cast<std::size_t>(cmd_logits.rows()));
  double sum = 0.0;
  for (Eigen::Index r = 0; r < cmd_logits.rows(); ++r) sum += row_cross_entropy(cmd_logits, r, targets[r]);
  return sum / static_cast<double>(cmd_logits.rows());
}

double args_loss(const nn::Mat& arg_logits, const CadSequence& gt, double alpha, int tol, bool mask_unused) {
  if (arg_logits.cols() != kNumCategories || arg_logits.rows() % kCadParamCount != 0) {
    throw ContractError("args_loss: expected (N_c * 15) x 257 logits");
  }
  const auto length = static_cast<std::size_t>(arg_logits.rows()) / kCadParamCount;
  const auto targets = argument_targets(gt, length, alpha, tol, mask_unused);
  double sum = 0.0;
  for (Eigen::Index r = 0; r < arg_logits.rows(); ++r) sum += row_cross_entropy(arg_logits, r, targets[r]);
  return sum / static_cast<double>(arg_logits.rows());
}

double total_loss(double cmd, double args, double beta) {
  if (beta <= 0.0) throw ContractError("total_loss: beta must be positive");
  return cmd + beta * args;
}

double acc_cmd(const CadSequence& pred, const CadSequence& gt) {
  if (pred.size() != gt.size() || gt.size() == 0) throw ContractError("acc_cmd: lengths differ");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) hits += pred.commands[i].kind == gt.commands[i].kind;
  return static_cast<double>(hits) / static_cast<double>(gt.size());
}

std::optional<double> acc_param(const CadSequence& pred, const CadSequence& gt, int eta) {
  if (pred.size() != gt.size()) throw ContractError("acc_param: lengths differ");
  if (eta < 0) throw ContractError("acc_param: eta must be nonnegative");
  std::size_t used = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto& g = gt.commands[i];
    const auto& p = pred.commands[i];
    if (g.kind != p.kind) continue;
    const auto& mask = usage_mask(g.kind);
    for (std::size_t j = 0; j < kCadParamCount; ++j) {
      if (!mask[j]) continue;
      ++used;
      hits += std::abs(g.params[j] - p.params[j]) < eta;
    }
  }
  if (used == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(used);
}

namespace {

double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

// Mean over `from` of the squared distance to the nearest point of `to`. `to`
// is searched outward from the x-sorted insertion point and the scan stops once
// the x gap alone exceeds the best distance, so the minimum is exact.
double directed_mean(std::span<const Vec3> from, std::span<const Vec3> to) {
  std::vector<Vec3> sorted(to.begin(), to.end());
  std::sort(sorted.begin(), sorted.end(), [](const Vec3& a, const Vec3& b) { return a.x() < b.x(); });
  double sum = 0.0;
  for (const Vec3& p : from) {
    const auto mid = std::lower_bound(sorted.begin(), sorted.end(), p.x(),
                                      [](const Vec3& a, double x) { return a.x() < x; });
    double best = std::numeric_limits<double>::infinity();
    for (auto it = mid; it != sorted.end(); ++it) {
      const double dx = it->x() - p.x();
      if (dx * dx > best) break;
      best = std::min(best, squared_distance(p, *it));
    }
    for (auto it = mid; it != sorted.begin();) {
      --it;
      const double dx = p.x() - it->x();
      if (dx * dx > best) break;
      best = std::min(best, squared_distance(p, *it));
    }
    sum += best;
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer(std::span<const Vec3> a, std::span<const Vec3> b) {
  if (a.empty() || b.empty()) throw ContractError("chamfer: empty point cloud");
  return directed_mean(a, b) + directed_mean(b, a);
}

UnitTransform UnitTransform::from_bounds(const Vec3& lo, const Vec3& hi) {
  UnitTransform t;
  t.center = 0.5 * (lo + hi);
  const double extent = (hi - lo).maxCoeff();
  t.scale = extent > 0.0 ? 1.0 / extent : 1.0;
  return t;
}

std::vector<Vec3> UnitTransform::apply(std::span<const Vec3> pts) const {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const Vec3& p : pts) out.push_back((p - center) * scale);
  return out;
}

MetricsReport evaluate_set(std::span<const CadSequence> preds, std::span<const CadSequence> gts,
                           std::size_t sample_count, std::uint64_t seed) {
  if (preds.size() != gts.size()) throw ContractError("evaluate_set: list sizes differ");
  if (gts.empty()) throw ContractError("evaluate_set: empty input");
  MetricsReport r;
  r.total = gts.size();
  double acc_cmd_sum = 0.0;
  double acc_param_sum = 0.0;
  double mcd_sum = 0.0;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    acc_cmd_sum += acc_cmd(preds[i], gts[i]);
    if (const auto ap = acc_param(preds[i], gts[i])) {
      acc_param_sum += *ap;
      ++r.acc_param_count;
    }
    const std::uint64_t pair_seed = mix_seed(seed, i);
    const auto pred_shape = reconstruct(preds[i]);
    std::optional<PointCloud> pred_cloud;
    if (pred_shape.ok()) {
      try {
        pred_cloud = sample_shape(*pred_shape.solid, sample_count, pair_seed);
      } catch (const SamplingError&) {
      }
    }
    if (!pred_cloud) {
      ++r.invalid;
      continue;
    }
    ++r.valid;
    const auto gt_shape = reconstruct(gts[i]);
    if (!gt_shape.ok()) continue;
    try {
      const PointCloud gt_cloud = sample_shape(*gt_shape.solid, sample_count, pair_seed);
      const auto [lo, hi] = gt_shape.solid->bounds();
      const auto t = UnitTransform::from_bounds(lo, hi);
      mcd_sum += chamfer(t.apply(gt_cloud.points), t.apply(pred_cloud->points));
      ++r.mcd_count;
    } catch (const SamplingError&) {
    }
  }
  r.acc_cmd = acc_cmd_sum / static_cast<double>(r.total);
  r.acc_param = r.acc_param_count > 0 ? acc_param_sum / static_cast<double>(r.acc_param_count) : 0.0;
  r.ir = static_cast<double>(r.invalid) / static_cast<double>(r.total);
  r.mcd = r.mcd_count > 0 ? mcd_sum / static_cast<double>(r.mcd_count) : 0.0;
  return r;
}

void write_report(std::ostream& out, const MetricsReport& r) {
  const auto old = out.precision(6);
  out << "acc_cmd = " << 100.0 * r.acc_cmd << '\n'
      << "acc_param = " << 100.0 * r.acc_param << '\n'
      << "ir = " << 100.0 * r.ir << '\n'
      << "mcd = " << 100.0 * r.mcd << '\n'
      << "total = " << r.total << '\n'
      << "valid = " << r.valid << '\n'
      << "invalid = " << r.invalid << '\n'
      << "acc_param_count = " << r.acc_param_count << '\n'
      << "mcd_count = " << r.mcd_count << '\n';
  out.precision(old);
}

}  // namespace vdcad
