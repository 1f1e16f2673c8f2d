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
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "vdcad/config.hpp"
#include "vdcad/errors.hpp"
#include "vdcad/loss_metrics.hpp"
#include "vdcad/model.hpp"
#include "vdcad/svg_ingest.hpp"
#include "vdcad/synth_data.hpp"
#include "vdcad/train.hpp"

namespace {

using namespace vdcad;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Soft targets against a direct evaluation of the smoothing formula.

Outcome soft_target_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick_y(0, kNumBins - 1);
  std::uniform_real_distribution<double> pick_alpha(0.05, 6.0);
  std::uniform_int_distribution<int> pick_tol(0, 12);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int y = pick_y(rng);
    const double alpha = pick_alpha(rng);
    const int tol = pick_tol(rng);
    std::vector<double> w(kNumCategories, 0.0);
    double z = 0.0;
    for (int k = 0; k < kNumBins; ++k) {
      if (std::abs(k - y) <= tol) {
        w[k] = std::exp(-alpha * std::abs(k - y));
        z += w[k];
      }
    }
    const auto t = soft_target(y, alpha, tol);
    for (int k = 0; k < kNumCategories; ++k) worst = std::max(worst, std::abs(t.p[k] - w[k] / z));
  }
  const double y5 = soft_target(5, 2.0, 3).p[5];
  const bool ok = worst <= 1e-9 && std::abs(y5 - 0.76204) <= 1e-5;
  return {ok, "max abs err " + fmt("%.2e", worst) + ", y~5 = " + fmt("%.6f", y5)};
}

// ---------------------------------------------------------------------------
// Random sequences for the loss and metric oracles.

CadSequence random_sequence(std::mt19937_64& rng, std::size_t length) {
  std::uniform_int_distribution<int> kind(0, kNumCadKinds - 2);
  std::uniform_int_distribution<int> bin(0, kNumBins - 1);
  std::uniform_int_distribution<std::size_t> len(0, length - 1);
  std::vector<CadCommand> content(len(rng));
  for (auto& c : content) {
    c.kind = static_cast<CadKind>(kind(rng));
    const auto& mask = usage_mask(c.kind);
    for (std::size_t s = 0; s < kCadParamCount; ++s) {
      if (mask[s]) c.params[s] = std::min(bin(rng), param_range(s).cardinality - 1);
    }
  }
  return make_cad_sequence(content, length);
}

// Copies `gt` and perturbs some kinds and parameters by small amounts.
CadSequence perturbed(const CadSequence& gt, std::mt19937_64& rng) {
  CadSequence out = gt;
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<int> delta(-5, 5);
  std::uniform_int_distribution<int> kind(0, kNumCadKinds - 1);
  for (auto& c : out.commands) {
    if (coin(rng) == 0) {
      c.kind = static_cast<CadKind>(kind(rng));
      c.params = CadCommand::unused();
      const auto& mask = usage_mask(c.kind);
      for (std::size_t s = 0; s < kCadParamCount; ++s) {
        if (mask[s]) c.params[s] = std::clamp(128 + 20 * delta(rng), 0, param_range(s).cardinality - 1);
      }
      continue;
    }
    const auto& mask = usage_mask(c.kind);
    for (std::size_t s = 0; s < kCadParamCount; ++s) {
      if (mask[s] && coin(rng) == 1) {
        c.params[s] = std::clamp(c.params[s] + delta(rng), 0, param_range(s).cardinality - 1);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2. With tol = 0 the smoothed loss is plain cross-entropy.

Outcome hard_ce_equivalence() {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 3.0);
  const std::size_t n = kDefaultCadLength;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CadSequence gt = random_sequence(rng, n);
    nn::Mat logits(n * kCadParamCount, kNumCategories);
    for (Eigen::Index i = 0; i < logits.size(); ++i) logits.data()[i] = normal(rng);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < kCadParamCount; ++s) {
        const Eigen::Index r = static_cast<Eigen::Index>(i * kCadParamCount + s);
        double z = 0.0;
        for (int k = 0; k < kNumCategories; ++k) z += std::exp(logits(r, k));
        sum += std::log(z) - logits(r, gt.commands[i].params[s]);
      }
    }
    const double hard = sum / static_cast<double>(n * kCadParamCount);
    const double soft = args_loss(logits, gt, kDefaultAlpha, 0);
    worst = std::max(worst, std::abs(hard - soft));
  }
  return {worst <= 1e-9, "max abs diff " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------------------
// 3. Whole-model gradient against central differences.

Outcome gradient_check() {
  RunConfig rc = desk_profile();
  rc.model.d_embed = 16;
  rc.model.blocks = 1;
  rc.model.heads = 2;
  rc.model.ff_dim = 32;
  rc.model.cad_len = 4;
  rc.model.view_mode = ViewMode::kIso;
  const Model model(rc.model, 11);
  Model& m = const_cast<Model&>(model);

  // A drawing from the generator and a short target that fits N_c = 4.
  const Record rec = generate_record(GenSpec{}, 5, "g");
  std::vector<std::vector<DrawingSequence>> inputs{model_views(rec, ViewMode::kIso)};
  const TokenBatch batch = make_token_batch(inputs, rc.model);
  std::vector<CadCommand> content{testing::cmd(CadKind::kSol), testing::circle(120, 130, 60), testing::extrude(200)};
  const CadSequence gt = make_cad_sequence(content, 4);
  const auto ct = command_targets(gt, 4);
  const auto at = argument_targets(gt, 4);

  auto loss = [&](bool with_grad) {
    nn::Graph g;
    const auto out = m.forward(g, batch, nullptr);
    const auto lc = g.soft_cross_entropy(out.cmd_logits, ct, 1.0 / 4);
    const auto la = g.soft_cross_entropy(out.arg_logits, at, 1.0 / (4 * kCadParamCount));
    const auto total = g.add(lc, g.scale(la, rc.train.beta));
    if (with_grad) {
      m.params().zero_grad();
      g.backward(total);
    }
    return g.value(total)(0, 0);
  };
  loss(true);

  // Per group: every entry of small groups; otherwise 24 entries with a
  // nonzero analytic gradient plus 8 arbitrary ones. Each group is scored by
  // the relative error of its checked gradient vector. Groups whose analytic
  // gradient vanishes (below 1e-12, e.g. attention key biases, which shift all
  // scores of a query equally) must have a numeric gradient at noise level.
  // The per-entry worst case is reported alongside.
  std::mt19937_64 rng(3);
  const double h = 1e-5;
  double worst_group = 0.0;
  std::string worst_group_name;
  double worst_entry = 0.0;
  std::size_t zero_groups = 0;
  std::size_t checked = 0;
  bool zero_ok = true;
  for (auto& p : m.params().all()) {
    std::vector<Eigen::Index> idx;
    const Eigen::Index size = p.value.size();
    if (size <= 32) {
      for (Eigen::Index i = 0; i < size; ++i) idx.push_back(i);
    } else {
      std::vector<Eigen::Index> nonzero;
      for (Eigen::Index i = 0; i < size; ++i) {
        if (p.grad.data()[i] != 0.0) nonzero.push_back(i);
      }
      std::shuffle(nonzero.begin(), nonzero.end(), rng);
      nonzero.resize(std::min<std::size_t>(nonzero.size(), 24));
      idx = nonzero;
      for (int k = 0; k < 8; ++k) idx.push_back(static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(size)));
    }
    const nn::Mat analytic = p.grad;
    double diff2 = 0.0, num2 = 0.0, ana2 = 0.0, max_num = 0.0, max_ana = 0.0;
    for (Eigen::Index i : idx) {
      double& v = p.value.data()[i];
      const double keep = v;
      v = keep + h;
      const double up = loss(false);
      v = keep - h;
      const double down = loss(false);
      v = keep;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic.data()[i];
      diff2 += (numeric - a) * (numeric - a);
      num2 += numeric * numeric;
      ana2 += a * a;
      max_num = std::max(max_num, std::abs(numeric));
      max_ana = std::max(max_ana, std::abs(a));
      worst_entry = std::max(worst_entry, std::abs(numeric - a) / std::max({std::abs(numeric), std::abs(a), 1e-6}));
      ++checked;
    }
    if (max_ana <= 1e-12) {
      ++zero_groups;
      zero_ok = zero_ok && max_num <= 1e-8;
      continue;
    }
    const double rel = std::sqrt(diff2) / std::max(std::sqrt(num2), std::sqrt(ana2));
    if (rel > worst_group) {
      worst_group = rel;
      worst_group_name = p.name;
    }
  }
  return {worst_group <= 1e-4 && zero_ok,
          "max group rel err " + fmt("%.2e", worst_group) + " (" + worst_group_name + "), " +
              std::to_string(zero_groups) + " zero-gradient groups " + (zero_ok ? "at noise level" : "NOT at noise level") +
              ", max per-entry rel err " + fmt("%.2e", worst_entry) + ", " + std::to_string(checked) + " entries in " +
              std::to_string(m.params().all().size()) + " groups"};
}

// ---------------------------------------------------------------------------
// 4. Metrics against counting and O(n^2) nearest-neighbour oracles.

Outcome metric_oracles() {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  std::size_t mismatched_presence = 0;
  std::uniform_int_distribution<int> npts(1, 120);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const CadSequence gt = random_sequence(rng, kDefaultCadLength);
    const CadSequence pred = perturbed(gt, rng);

    std::size_t same_kind = 0;
    std::size_t used = 0;
    std::size_t close = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      const auto& g = gt.commands[i];
      const auto& p = pred.commands[i];
      if (g.kind != p.kind) continue;
      ++same_kind;
      for (std::size_t s = 0; s < kCadParamCount; ++s) {
        if (!usage_mask(g.kind)[s]) continue;
        ++used;
        close += std::abs(g.params[s] - p.params[s]) < 3;
      }
    }
    worst = std::max(worst, std::abs(acc_cmd(pred, gt) - double(same_kind) / double(gt.size())));
    const auto ap = acc_param(pred, gt, 3);
    if (ap.has_value() != (used > 0)) ++mismatched_presence;
    if (ap && used > 0) worst = std::max(worst, std::abs(*ap - double(close) / double(used)));

    std::vector<Vec3> a(npts(rng)), b(npts(rng));
    for (auto& v : a) v = Vec3(normal(rng), normal(rng), normal(rng));
    for (auto& v : b) v = Vec3(normal(rng), normal(rng), 0.3 * normal(rng));
    auto directed = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
      double sum = 0.0;
      for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to) best = std::min(best, (p - q).squaredNorm());
        sum += best;
      }
      return sum / double(from.size());
    };
    worst = std::max(worst, std::abs(chamfer(a, b) - (directed(a, b) + directed(b, a))));
  }
  return {worst <= 1e-12 && mismatched_presence == 0,
          "max abs diff " + fmt("%.2e", worst) + ", presence mismatches " + std::to_string(mismatched_presence)};
}

// ---------------------------------------------------------------------------
// 5. Ingest is order-invariant and idempotent.

std::string svg_text(const std::vector<Segment>& segs, double w, double h) {
  std::ostringstream out;
  out.precision(17);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  for (const auto& s : segs) {
    out << "<path d=\"M " << s.start.x() << ' ' << s.start.y();
    if (s.kind == SegmentKind::kLine) {
      out << " L " << s.end.x() << ' ' << s.end.y();
    } else {
      out << " C " << s.c1.x() << ' ' << s.c1.y() << ' ' << s.c2.x() << ' ' << s.c2.y() << ' ' << s.end.x()
          << ' ' << s.end.y();
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

// Closed polygons with an occasional cubic edge, plus a few loose strokes.
std::vector<Segment> random_drawing(std::mt19937_64& rng, double w, double h) {
  std::uniform_real_distribution<double> ux(0.0, w), uy(0.0, h), unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_loops(1, 4), n_sides(3, 6), n_loose(0, 3);
  std::vector<Segment> segs;
  const int loops = n_loops(rng);
  for (int l = 0; l < loops; ++l) {
    const Point2 c(ux(rng), uy(rng));
    const double r = 0.05 * std::min(w, h) + 0.3 * std::min(w, h) * unit(rng);
    const int sides = n_sides(rng);
    const double phase = 6.283185307179586 * unit(rng);
    std::vector<Point2> pts;
    for (int k = 0; k < sides; ++k) {
      const double a = phase + 6.283185307179586 * k / sides;
      pts.emplace_back(std::clamp(c.x() + r * std::cos(a), 0.0, w), std::clamp(c.y() + r * std::sin(a), 0.0, h));
    }
    for (int k = 0; k < sides; ++k) {
      const Point2& a = pts[k];
      const Point2& b = pts[(k + 1) % sides];
      if (unit(rng) < 0.3) {
        const Point2 bulge(-(b - a).y() * 0.3, (b - a).x() * 0.3);
        auto inside = [&](Point2 p) { return Point2(std::clamp(p.x(), 0.0, w), std::clamp(p.y(), 0.0, h)); };
        segs.push_back(Segment::cubic(a, inside(a + (b - a) / 3 + bulge), inside(a + 2 * (b - a) / 3 + bulge), b));
      } else {
        segs.push_back(Segment::line(a, b));
      }
    }
  }
  const int loose = n_loose(rng);
  for (int k = 0; k < loose; ++k) segs.push_back(Segment::line(Point2(ux(rng), uy(rng)), Point2(ux(rng), uy(rng))));
  return segs;
}

Outcome ingest_determinism() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> size(20.0, 900.0);
  int variant_failures = 0;
  int idempotence_failures = 0;
  int drawings = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double w = size(rng);
    const double h = size(rng);
    auto segs = random_drawing(rng, w, h);
    DrawingSequence base;
    try {
      base = drawing_from_svg(svg_text(segs, w, h), ViewLabel::kFront);
    } catch (const LengthExceededError&) {
      continue;
    }
    ++drawings;
    for (int p = 0; p < 3; ++p) {
      auto shuffled = segs;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      if (drawing_from_svg(svg_text(shuffled, w, h), ViewLabel::kFront) != base) ++variant_failures;
    }
    if (drawing_from_svg(drawing_to_svg(base), ViewLabel::kFront) != base) ++idempotence_failures;
  }
  const bool ok = drawings >= 190 && variant_failures == 0 && idempotence_failures == 0;
  return {ok, std::to_string(drawings) + " drawings, " + std::to_string(variant_failures) +
                  " permutation mismatches, " + std::to_string(idempotence_failures) + " idempotence mismatches"};
}

// ---------------------------------------------------------------------------
// 6. Cube reconstruction, sampling and self-chamfer.

Outcome geometry_sanity() {
  const auto result = reconstruct(testing::cube_sequence());
  if (!result.ok()) return {false, "cube sequence reconstructs invalid: " + result.invalid->detail};
  const Solid& cube = *result.solid;
  const auto [lo, hi] = cube.bounds();
  const double tol = cube.on_tolerance();
  const auto first = sample_shape(cube, 2000, 1);
  const auto second = sample_shape(cube, 2000, 2);
  std::size_t off_face = 0;
  for (const auto& p : first.points) {
    const Vec3 outside = (lo - p).cwiseMax(p - hi).cwiseMax(Vec3::Zero());
    const double face = std::min((p - lo).cwiseAbs().minCoeff(), (hi - p).cwiseAbs().minCoeff());
    if (outside.norm() > tol || face > tol) ++off_face;
  }
  const auto t = UnitTransform::from_bounds(lo, hi);
  const double cd = chamfer(t.apply(first.points), t.apply(second.points));
  const bool ok = off_face == 0 && cd <= 5e-4;
  return {ok, "valid, " + std::to_string(off_face) + " of 2000 points off the faces (tol " + fmt("%.1e", tol) +
                  "), self-chamfer " + fmt("%.3e", cd) + " (limit 5.0e-04)"};
}

// ---------------------------------------------------------------------------
// 7 and 9. Overfit run, ablations and split-run resume.

struct OverfitRun {
  Outcome overfit;
  Outcome resume;
};

std::vector<double> window_means(const std::vector<double>& losses, std::size_t window) {
  std::vector<double> out;
  for (std::size_t s = 0; s + window <= losses.size(); s += window) {
    double sum = 0.0;
    for (std::size_t i = s; i < s + window; ++i) sum += losses[i];
    out.push_back(sum / double(window));
  }
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.size() >= 2;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.3f", x);
  return s;
}

OverfitRun overfit_and_resume(const fs::path& work) {
  const auto data = generate_dataset(GenSpec{}, 64, 7);
  const RunConfig rc = desk_profile();
  OverfitRun out;

  Trainer trainer(rc, data);
  const long total = trainer.total_steps();
  const long half = total / 2;
  const auto state_path = (work / "half.ckpt").string();
  std::vector<double> losses;
  while (trainer.steps_done() < total) {
    losses.push_back(trainer.step().loss);
    if (trainer.steps_done() == half) trainer.save_state(state_path);
  }
  const MetricsReport r = evaluate(trainer.model(), data, kDefaultSampleCount, 0);

  // Ablations: same data, a shorter schedule, windowed mean losses must fall.
  std::string ablation_detail;
  bool ablations_ok = true;
  for (int variant = 0; variant < 2; ++variant) {
    RunConfig ac = rc;
    if (variant == 0) ac.model.guidance = false;
    else ac.model.fusion = Fusion::kAdd;
    ac.train.max_steps = 300;
    Trainer t(ac, data);
    std::vector<double> l;
    while (t.steps_done() < t.total_steps()) l.push_back(t.step().loss);
    const auto w = window_means(l, 100);
    const bool dec = strictly_decreasing(w);
    ablations_ok = ablations_ok && dec;
    ablation_detail += std::string(variant == 0 ? "; guidance off " : "; fusion add ") + "[" + join(w) + "]";
  }

  const bool ok = r.acc_cmd >= 0.98 && r.acc_param >= 0.90 && r.ir <= 0.05 && ablations_ok;
  out.overfit = {ok, std::to_string(total) + " steps, final loss " + fmt("%.4f", losses.back()) + ", acc_cmd " +
                         fmt("%.4f", r.acc_cmd) + ", acc_param " + fmt("%.4f", r.acc_param) + ", ir " +
                         fmt("%.4f", r.ir) + ", mcd " + fmt("%.2e", r.mcd) + ablation_detail};

  Trainer resumed(rc, data);
  resumed.load_state(state_path);
  while (resumed.steps_done() < total) resumed.step();
  std::size_t differing = 0;
  std::size_t scalars = 0;
  for (const auto& p : trainer.model().params().all()) {
    const auto& q = resumed.model().params().get(p.name).value;
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      ++scalars;
      // Bitwise comparison of the 64-bit weights.
      if (std::memcmp(&p.value.data()[i], &q.data()[i], sizeof(double)) != 0) ++differing;
    }
  }
  out.resume = {differing == 0, "resumed at step " + std::to_string(half) + " of " + std::to_string(total) + ", " +
                                    std::to_string(differing) + " of " + std::to_string(scalars) +
                                    " weights differ"};
  return out;
}

// ---------------------------------------------------------------------------
// 8. Drawing coordinate quantization.

Outcome quantization() {
  int round_trip_failures = 0;
  for (int b = 0; b < kNumBins; ++b) round_trip_failures += quantize_coord(dequantize_coord(b)) != b;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, kViewboxSize);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u(rng);
    worst = std::max(worst, std::abs(dequantize_coord(quantize_coord(v)) - v));
  }
  worst = std::max({worst, std::abs(dequantize_coord(quantize_coord(0.0))),
                    std::abs(dequantize_coord(quantize_coord(kViewboxSize)) - kViewboxSize)});
  const bool ok = round_trip_failures == 0 && worst <= 100.0 / 255.0 + 1e-9;
  return {ok, std::to_string(round_trip_failures) + " bin round-trip failures, max error " + fmt("%.6f", worst) +
                  " (bound " + fmt("%.6f", 100.0 / 255.0) + ")"};
}

// ---------------------------------------------------------------------------

struct Timed {
  Outcome outcome;
  double seconds = 0.0;
};

Timed timed(const std::function<Outcome()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed t;
  try {
    t.outcome = f();
  } catch (const std::exception& e) {
    t.outcome = {false, std::string("exception: ") + e.what()};
  }
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

bool report(int id, const char* name, const Timed& t, double budget_seconds) {
  const bool in_time = budget_seconds <= 0.0 || t.seconds < budget_seconds;
  const bool pass = t.outcome.pass && in_time;
  std::printf("criterion %d %s %s: %s [%.2f s%s]\n", id, pass ? "PASS" : "FAIL", name, t.outcome.detail.c_str(),
              t.seconds, in_time ? "" : ", over budget");
  std::fflush(stdout);
  return pass;
}

}  // namespace

// With arguments, runs only the listed criteria (7 and 9 share one run).
int main(int argc, char** argv) {
  std::vector<bool> wanted(10, argc == 1);
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > 9) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    wanted[id] = true;
  }
  const fs::path work = fs::temp_directory_path() / "vdcad_acceptance";
  fs::create_directories(work);
  int failures = 0;
  int run_count = 0;
  auto check = [&](int id, const char* name, const std::function<Outcome()>& f, double budget) {
    if (!wanted[id]) return;
    ++run_count;
    failures += !report(id, name, timed(f), budget);
  };
  check(1, "soft-target oracle", soft_target_oracle, 1.0);
  check(2, "hard-CE equivalence", hard_ce_equivalence, 5.0);
  check(3, "gradient check", gradient_check, 60.0);
  check(4, "metric oracles", metric_oracles, 30.0);
  check(5, "ingest determinism", ingest_determinism, 10.0);
  check(6, "geometry sanity", geometry_sanity, 10.0);

  if (wanted[7] || wanted[9]) {
    OverfitRun run;
    run.resume.detail = "overfit run did not complete";
    const Timed overfit = timed([&] {
      run = overfit_and_resume(work);
      return run.overfit;
    });
    if (wanted[7]) {
      ++run_count;
      failures += !report(7, "overfit experiment", overfit, 3600.0);
    }
    if (wanted[9]) {
      ++run_count;
      // Shares criterion 7's run, so no separate time budget.
      failures += !report(9, "resume determinism", Timed{run.resume, 0.0}, 0.0);
    }
  }
  check(8, "quantization", quantization, 1.0);

  fs::remove_all(work);
  std::printf("%d of %d criteria failed\n", failures, run_count);
  return failures == 0 ? 0 : 1;
}
