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
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "vdcad/errors.hpp"
#include "vdcad/loss_metrics.hpp"

namespace vdcad {
namespace {

using testing::cmd;

double brute_chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  auto directed = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double sum = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, (p - q).squaredNorm());
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return directed(a, b) + directed(b, a);
}

TEST_CASE("soft target around an interior bin") {
  const auto t = soft_target(5);
  const double expected[] = {0.0018889, 0.0139573, 0.1031315, 0.7620445};
  for (int k = 2; k <= 5; ++k) {
    CHECK(t.p[k] == doctest::Approx(expected[k - 2]).epsilon(1e-5));
    CHECK(t.p[10 - k] == doctest::Approx(t.p[k]));
  }
  CHECK(t.p[1] == 0.0);
  CHECK(t.p[9] == 0.0);
  CHECK(t.p[kUnusedBin] == 0.0);
}

TEST_CASE("soft target clipped at the lower edge") {
  const auto t = soft_target(1);
  const double expected[] = {0.1047921, 0.7743145, 0.1047921, 0.0141821, 0.0019193};
  for (int k = 0; k <= 4; ++k) CHECK(t.p[k] == doctest::Approx(expected[k]).epsilon(1e-5));
}

TEST_CASE("soft targets are distributions") {
  for (int y : {0, 1, 2, 3, 100, 252, 254, 255, 256}) {
    for (double alpha : {0.5, 2.0, 8.0}) {
      const auto t = soft_target(y, alpha, 3);
      double sum = 0.0;
      for (double v : t.p) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      int argmax = 0;
      for (int k = 1; k < kNumCategories; ++k) {
        if (t.p[k] > t.p[argmax]) argmax = k;
      }
      CHECK(argmax == y);
    }
  }
  CHECK(soft_target(kUnusedBin).p[kUnusedBin] == 1.0);
  CHECK(soft_target(7, 2.0, 0).p[7] == 1.0);
  CHECK_THROWS_AS(soft_target(257), ContractError);
  CHECK_THROWS_AS(soft_target(3, 0.0, 3), ContractError);
}

TEST_CASE("losses reach their floor on one-hot logits") {
  const auto gt = testing::square_extrude(0, 100);
  const std::size_t n = 8;
  const auto padded = gt.padded(n);
  nn::Mat cmd_logits = nn::Mat::Constant(n, kNumCadKinds, -50.0);
  for (std::size_t i = 0; i < n; ++i) cmd_logits(i, static_cast<int>(padded.commands[i].kind)) = 50.0;
  CHECK(cmd_loss(cmd_logits, padded) < 1e-20);
  CHECK(cmd_loss(nn::Mat::Zero(n, kNumCadKinds), padded) == doctest::Approx(std::log(6.0)));

  // With logits equal to log targets the argument loss is the mean entropy.
  nn::Mat arg_logits(n * 15, kNumCategories);
  const auto targets = argument_targets(padded, n);
  double entropy = 0.0;
  for (std::size_t r = 0; r < targets.size(); ++r) {
    arg_logits.row(r).setConstant(-1e3);
    for (const auto& [k, w] : targets[r]) {
      arg_logits(r, k) = std::log(w);
      entropy -= w * std::log(w);
    }
  }
  CHECK(args_loss(arg_logits, padded) == doctest::Approx(entropy / (n * 15)));
  CHECK(total_loss(1.0, 2.0) == 5.0);
  CHECK_THROWS_AS(total_loss(1.0, 2.0, 0.0), ContractError);
  CHECK_THROWS_AS(cmd_loss(nn::Mat::Zero(n, 5), padded), ContractError);
}

TEST_CASE("masking unused slots removes their rows from the argument loss") {
  const auto gt = testing::square_extrude(0, 100).padded(8);
  const nn::Mat flat = nn::Mat::Zero(8 * 15, kNumCategories);
  // 4 lines x 2 slots + 10 extrude slots carry a target; the rest are unused.
  const double used_rows = 18.0;
  CHECK(args_loss(flat, gt, kDefaultAlpha, kDefaultTolerance, true) ==
        doctest::Approx(std::log(double(kNumCategories)) * used_rows / (8 * 15)));
  CHECK(args_loss(flat, gt) == doctest::Approx(std::log(double(kNumCategories))));
  const auto rows = argument_targets(gt, 8, kDefaultAlpha, kDefaultTolerance, true);
  CHECK(rows[0].empty());
  CHECK_FALSE(rows[15].empty());
}

TEST_CASE("command accuracy counts kinds over the full length") {
  const auto gt = testing::square_extrude(0, 100);
  CHECK(acc_cmd(gt, gt) == 1.0);
  auto pred = gt;
  pred.commands[1].kind = CadKind::kArc;
  CHECK(acc_cmd(pred, gt) == doctest::Approx(59.0 / 60.0));
  CHECK_THROWS_AS(acc_cmd(gt.padded(10), gt), ContractError);
}

TEST_CASE("parameter accuracy over matching kinds") {
  const auto gt = testing::square_extrude(0, 100);
  CHECK(acc_param(gt, gt) == 1.0);
  auto pred = gt;
  pred.commands[1].params[kSlotX] += 3;  // outside eta = 3
  pred.commands[2].params[kSlotY] += 2;  // inside
  // 4 lines x 2 slots + 10 extrude slots = 18 used slots.
  CHECK(*acc_param(pred, gt) == doctest::Approx(17.0 / 18.0));
  pred.commands[1].kind = CadKind::kCircle;  // mismatched kinds drop out
  CHECK(*acc_param(pred, gt) == doctest::Approx(16.0 / 16.0));

  std::vector<CadCommand> only_sol{cmd(CadKind::kSol)};
  const auto empty = make_cad_sequence(only_sol);
  CHECK_FALSE(acc_param(empty, empty).has_value());
}

TEST_CASE("chamfer on a hand example") {
  std::vector<Vec3> a{Vec3(0, 0, 0)};
  std::vector<Vec3> b{Vec3(1, 0, 0), Vec3(3, 0, 0)};
  CHECK(chamfer(a, b) == doctest::Approx(1.0 + 5.0));
  CHECK(chamfer(a, a) == 0.0);
  CHECK_THROWS_AS(chamfer(a, std::vector<Vec3>{}), ContractError);
}

TEST_CASE("chamfer agrees with brute force") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vec3> a(150 + trial * 13), b(90 + trial * 7);
    for (auto& p : a) p = Vec3(u(rng), u(rng), u(rng));
    for (auto& p : b) p = Vec3(u(rng), 0.5 * u(rng), u(rng));
    CHECK(chamfer(a, b) == doctest::Approx(brute_chamfer(a, b)).epsilon(1e-12));
    CHECK(chamfer(a, b) == doctest::Approx(chamfer(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("unit transform fits the box into the unit cube") {
  const auto t = UnitTransform::from_bounds(Vec3(0, 0, 0), Vec3(4, 2, 1));
  const auto out = t.apply(std::vector<Vec3>{Vec3(0, 0, 0), Vec3(4, 2, 1)});
  CHECK(out[0].isApprox(Vec3(-0.5, -0.25, -0.125)));
  CHECK(out[1].isApprox(Vec3(0.5, 0.25, 0.125)));
}

TEST_CASE("set evaluation") {
  const auto good = testing::square_extrude(0, 100);
  const auto other = testing::square_extrude(0, 140);
  std::vector<CadSequence> gts{good, good, good};
  std::vector<CadCommand> bad_content{testing::extrude(200)};
  std::vector<CadSequence> preds{good, other, make_cad_sequence(bad_content)};
  const auto r = evaluate_set(preds, gts, 500, 4);
  CHECK(r.total == 3);
  CHECK(r.invalid == 1);
  CHECK(r.valid == 2);
  CHECK(r.ir == doctest::Approx(1.0 / 3.0));
  CHECK(r.mcd_count == 2);
  CHECK(r.mcd > 0.0);
  // Identical pairs share a seed, so the first pair contributes exactly zero.
  const auto same = evaluate_set(std::span(preds).first(1), std::span(gts).first(1), 500, 4);
  CHECK(same.mcd == 0.0);
  CHECK(same.acc_cmd == 1.0);
  CHECK(same.acc_param == 1.0);
  CHECK(evaluate_set(preds, gts, 500, 4).mcd == r.mcd);

  std::ostringstream out;
  write_report(out, same);
  CHECK(out.str().find("acc_cmd = 100\n") != std::string::npos);
  CHECK(out.str().find("ir = 0\n") != std::string::npos);
  CHECK_THROWS_AS(evaluate_set(preds, std::span(gts).first(2)), ContractError);
}

}  // namespace
}  // namespace vdcad
