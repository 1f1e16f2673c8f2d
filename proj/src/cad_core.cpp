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
#include "vdcad/cad_core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vdcad/errors.hpp"

namespace vdcad {

namespace {

constexpr std::array<std::string_view, kNumCadKinds> kKindNames = {"SOL",    "Line",    "Arc",
                                                                   "Circle", "Extrude", "EOS"};
constexpr std::array<std::string_view, kCadParamCount> kSlotNames = {
    "x", "y", "alpha", "f", "r", "theta", "gamma", "px", "py", "ps", "s", "e1", "e2", "b", "mu"};

constexpr SlotMask make_mask(std::initializer_list<std::size_t> slots) {
  SlotMask m{};
  for (auto s : slots) m[s] = true;
  return m;
}

constexpr SlotMask kNoSlots{};
constexpr SlotMask kLineSlots = make_mask({kSlotX, kSlotY});
constexpr SlotMask kArcSlots = make_mask({kSlotX, kSlotY, kSlotAlpha, kSlotArcFlag});
constexpr SlotMask kCircleSlots = make_mask({kSlotX, kSlotY, kSlotRadius});
constexpr SlotMask kExtrudeSlots =
    make_mask({kSlotTheta, kSlotGamma, kSlotPx, kSlotPy, kSlotPs, kSlotScale, kSlotExtent1,
               kSlotExtent2, kSlotBoolean, kSlotExtentMode});

}  // namespace

std::string_view to_string(CadKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

CadKind parse_cad_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<CadKind>(i);
  }
  throw SchemaError("unknown CAD command kind '" + std::string(name) + "'");
}

std::string_view slot_name(std::size_t slot) { return kSlotNames.at(slot); }

const SlotMask& usage_mask(CadKind kind) {
  switch (kind) {
    case CadKind::kLine: return kLineSlots;
    case CadKind::kArc: return kArcSlots;
    case CadKind::kCircle: return kCircleSlots;
    case CadKind::kExtrude: return kExtrudeSlots;
    case CadKind::kSol:
    case CadKind::kEos: return kNoSlots;
  }
  return kNoSlots;
}

std::span<const CadCommand> CadSequence::content() const {
  auto eos = std::find_if(commands.begin(), commands.end(),
                          [](const CadCommand& c) { return c.kind == CadKind::kEos; });
  return {commands.data(), static_cast<std::size_t>(eos - commands.begin())};
}

CadSequence CadSequence::padded(std::size_t length) const {
  return make_cad_sequence(content(), length);
}

CadSequence make_cad_sequence(std::span<const CadCommand> content, std::size_t length) {
  if (content.size() + 1 > length) throw LengthExceededError(content.size(), length - 1);
  CadSequence seq;
  seq.commands.assign(content.begin(), content.end());
  seq.commands.resize(length, CadCommand{});
  return seq;
}

ParamRange param_range(std::size_t slot) {
  constexpr double pi = std::numbers::pi;
  switch (slot) {
    case kSlotX:
    case kSlotY:
    case kSlotPx:
    case kSlotPy:
    case kSlotPs:
    case kSlotExtent1:
    case kSlotExtent2: return {SlotType::kContinuous, -1.0, 1.0, kNumBins};
    case kSlotRadius: return {SlotType::kContinuous, 0.0, 1.0, kNumBins};
    case kSlotScale: return {SlotType::kContinuous, 0.0, 2.0, kNumBins};
    case kSlotAlpha:
    case kSlotTheta:
    case kSlotGamma: return {SlotType::kPeriodic, -pi, pi, kNumBins};
    case kSlotArcFlag: return {SlotType::kEnumeration, 0, 1, 2};
    case kSlotBoolean: return {SlotType::kEnumeration, 0, 3, 4};
    case kSlotExtentMode: return {SlotType::kEnumeration, 0, 2, 3};
    default: throw RangeError("parameter slot " + std::to_string(slot) + " out of range");
  }
}

double dequantize_param(std::size_t slot, int bin) {
  const ParamRange range = param_range(slot);
  if (bin < 0 || bin >= range.cardinality) {
    throw RangeError("bin " + std::to_string(bin) + " invalid for slot " +
                     std::string(slot_name(slot)));
  }
  switch (range.type) {
    case SlotType::kContinuous: return range.low + bin * (range.high - range.low) / (kNumBins - 1);
    case SlotType::kPeriodic: return range.low + bin * (range.high - range.low) / kNumBins;
    case SlotType::kEnumeration: return bin;
  }
  return 0.0;
}

int quantize_param(std::size_t slot, double value) {
  const ParamRange range = param_range(slot);
  switch (range.type) {
    case SlotType::kContinuous: {
      const double t = (value - range.low) / (range.high - range.low) * (kNumBins - 1);
      return static_cast<int>(std::clamp(std::round(t), 0.0, double(kNumBins - 1)));
    }
    case SlotType::kPeriodic: {
      const double period = range.high - range.low;
      double t = std::round((value - range.low) / period * kNumBins);
      t = std::fmod(t, double(kNumBins));
      if (t < 0) t += kNumBins;
      return static_cast<int>(t);
    }
    case SlotType::kEnumeration: {
      const long v = std::lround(value);
      if (v < 0 || v >= range.cardinality) throw RangeError("enumeration value out of range");
      return static_cast<int>(v);
    }
  }
  return 0;
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kEmpty: return "empty-content";
    case Violation::kExtrudeWithoutLoop: return "extrude-without-loop";
    case Violation::kCurveOutsideLoop: return "curve-outside-loop";
    case Violation::kEmptyLoop: return "empty-loop";
    case Violation::kOpenLoop: return "open-loop";
    case Violation::kParameterOutOfRange: return "parameter-out-of-range";
    case Violation::kFirstExtrudeNotNewBody: return "first-extrude-not-new-body";
    case Violation::kDanglingSketch: return "dangling-sketch";
    case Violation::kDegenerateGeometry: return "degenerate-geometry";
  }
  return "?";
}

namespace {

class Validator {
 public:
  std::vector<ViolationEntry> run(const CadSequence& seq) {
    const auto content = seq.content();
    if (content.empty()) {
      add(Violation::kEmpty, 0, "no commands before EOS");
      return std::move(out_);
    }
    for (std::size_t i = 0; i < content.size(); ++i) step(i, content[i]);
    close_loop();
    if (complete_loops_ > 0 || empty_loops_ > 0) {
      add(Violation::kDanglingSketch, content.size(), "sketch loops not consumed by an extrude");
    }
    return std::move(out_);
  }

 private:
  struct Curve {
    std::size_t position;
    const CadCommand* cmd;
  };

  void add(Violation v, std::size_t pos, std::string detail) {
    out_.push_back({v, pos, std::move(detail)});
  }

  bool check_params(std::size_t pos, const CadCommand& cmd) {
    const SlotMask& mask = usage_mask(cmd.kind);
    bool ok = true;
    for (std::size_t s = 0; s < kCadParamCount; ++s) {
      const int b = cmd.params[s];
      if (!mask[s]) {
        if (b != kUnusedBin) {
          add(Violation::kParameterOutOfRange, pos,
              "slot " + std::string(slot_name(s)) + " must be unused");
          ok = false;
        }
        continue;
      }
      if (b < 0 || b >= param_range(s).cardinality) {
        add(Violation::kParameterOutOfRange, pos,
            "slot " + std::string(slot_name(s)) + " has bin " + std::to_string(b));
        ok = false;
      }
    }
    return ok;
  }

  void step(std::size_t pos, const CadCommand& cmd) {
    const bool params_ok = check_params(pos, cmd);
    switch (cmd.kind) {
      case CadKind::kSol:
        close_loop();
        in_loop_ = true;
        break;
      case CadKind::kLine:
      case CadKind::kArc:
      case CadKind::kCircle:
        if (!in_loop_) {
          add(Violation::kCurveOutsideLoop, pos, "curve without a preceding SOL");
        } else {
          loop_.push_back({pos, &cmd});
          loop_params_ok_ = loop_params_ok_ && params_ok;
        }
        break;
      case CadKind::kExtrude:
        close_loop();
        if (complete_loops_ == 0) add(Violation::kExtrudeWithoutLoop, pos, "no sketch loop");
        if (params_ok) check_extrude(pos, cmd);
        complete_loops_ = 0;
        empty_loops_ = 0;
        ++extrudes_;
        break;
      case CadKind::kEos:
        break;
    }
  }

  void check_extrude(std::size_t pos, const CadCommand& cmd) {
    const auto& p = cmd.params;
    if (extrudes_ == 0 && p[kSlotBoolean] != static_cast<int>(BooleanOp::kNewBody)) {
      add(Violation::kFirstExtrudeNotNewBody, pos, "first extrude must create a new body");
    }
    if (p[kSlotScale] == 0) add(Violation::kDegenerateGeometry, pos, "zero sketch scale");
    // Compare in bin space: e1 = -e2 exactly when the bins sum to 255.
    const int e1 = 2 * p[kSlotExtent1] - (kNumBins - 1);
    const int e2 = 2 * p[kSlotExtent2] - (kNumBins - 1);
    const auto mode = static_cast<ExtentMode>(p[kSlotExtentMode]);
    const int length = mode == ExtentMode::kTwoSided ? std::abs(e1 + e2) : std::abs(e1);
    if (length == 0) add(Violation::kDegenerateGeometry, pos, "zero extrusion extent");
  }

  void close_loop() {
    if (!in_loop_) return;
    in_loop_ = false;
    if (loop_.empty()) {
      add(Violation::kEmptyLoop, 0, "SOL without curves");
      ++empty_loops_;
      return;
    }
    if (loop_params_ok_) check_loop_geometry();
    ++complete_loops_;
    loop_.clear();
    loop_params_ok_ = true;
  }

  void check_loop_geometry() {
    const std::size_t n = loop_.size();
    const std::size_t first = loop_.front().position;
    bool has_circle = false;
    bool lines_only = true;
    for (const auto& c : loop_) {
      has_circle = has_circle || c.cmd->kind == CadKind::kCircle;
      lines_only = lines_only && c.cmd->kind == CadKind::kLine;
    }
    if (has_circle) {
      if (n > 1) {
        add(Violation::kOpenLoop, first, "circle shares its loop with other curves");
      } else if (loop_.front().cmd->params[kSlotRadius] == 0) {
        add(Violation::kDegenerateGeometry, first, "zero circle radius");
      }
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& prev = loop_[(i + n - 1) % n].cmd->params;
      const auto& cur = loop_[i].cmd->params;
      const double gap = std::hypot(double(cur[kSlotX] - prev[kSlotX]),
                                    double(cur[kSlotY] - prev[kSlotY]));
      if (gap <= kCloseTolerance) {
        add(Violation::kOpenLoop, loop_[i].position, "curve collapses to a point");
        return;
      }
      if (loop_[i].cmd->kind == CadKind::kArc &&
          dequantize_param(kSlotAlpha, cur[kSlotAlpha]) == 0.0) {
        add(Violation::kDegenerateGeometry, loop_[i].position, "zero arc sweep");
      }
    }
    if (lines_only && n < 3) add(Violation::kOpenLoop, first, "line loop encloses no area");
  }

  std::vector<ViolationEntry> out_;
  std::vector<Curve> loop_;
  bool in_loop_ = false;
  bool loop_params_ok_ = true;
  int complete_loops_ = 0;
  int empty_loops_ = 0;
  int extrudes_ = 0;
};

}  // namespace

std::vector<ViolationEntry> validate_cad_sequence(const CadSequence& seq) {
  return Validator{}.run(seq);
}

CadSequence merge_outputs(std::span<const CadKind> kinds, std::span<const CadParams> args) {
  if (kinds.size() != args.size()) throw ContractError("merge_outputs: length mismatch");
  CadSequence seq;
  seq.commands.resize(kinds.size());
  bool ended = false;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    ended = ended || kinds[i] == CadKind::kEos;
    if (ended) continue;
    CadCommand& cmd = seq.commands[i];
    cmd.kind = kinds[i];
    const SlotMask& mask = usage_mask(cmd.kind);
    for (std::size_t s = 0; s < kCadParamCount; ++s) {
      if (mask[s]) cmd.params[s] = args[i][s];
    }
  }
  return seq;
}

bool sequence_equal_within(const CadSequence& a, const CadSequence& b, int eta) {
  if (eta < 0) throw ContractError("sequence_equal_within: negative tolerance");
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ca = a.commands[i];
    const auto& cb = b.commands[i];
    if (ca.kind != cb.kind) return false;
    const SlotMask& mask = usage_mask(ca.kind);
    for (std::size_t s = 0; s < kCadParamCount; ++s) {
      if (mask[s] && std::abs(ca.params[s] - cb.params[s]) >= eta) return false;
    }
  }
  return true;
}

void write_cad_text(std::ostream& out, const CadSequence& seq) {
  for (const auto& cmd : seq.content()) {
    out << to_string(cmd.kind);
    for (int v : cmd.params) out << ' ' << v;
    out << '\n';
  }
  out << "EOS";
  for (std::size_t s = 0; s < kCadParamCount; ++s) out << ' ' << kUnusedBin;
  out << '\n';
}

CadSequence read_cad_text(std::istream& in, std::size_t length) {
  std::vector<CadCommand> content;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    CadCommand cmd;
    cmd.kind = parse_cad_kind(name);
    for (auto& v : cmd.params) {
      if (!(ls >> v)) throw ParseError("expected 15 integers", line_no);
    }
    if (cmd.kind == CadKind::kEos) break;
    content.push_back(cmd);
  }
  return make_cad_sequence(content, length);
}

}  // namespace vdcad
