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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vdcad/svg_core.hpp"

namespace vdcad {

enum class CadKind : std::uint8_t {
  kSol = 0,  // start of a sketch loop
  kLine = 1,
  kArc = 2,
  kCircle = 3,
  kExtrude = 4,
  kEos = 5,
};
inline constexpr int kNumCadKinds = 6;
inline constexpr std::size_t kCadParamCount = 15;
inline constexpr std::size_t kDefaultCadLength = 60;

// Parameter slot order of the argument vector.
enum CadSlot : std::size_t {
  kSlotX = 0,
  kSlotY,
  kSlotAlpha,      // arc sweep
  kSlotArcFlag,    // arc direction, 1 = counterclockwise
  kSlotRadius,
  kSlotTheta,      // sketch plane tilt
  kSlotGamma,      // sketch plane azimuth
  kSlotPx,
  kSlotPy,
  kSlotPs,
  kSlotScale,
  kSlotExtent1,
  kSlotExtent2,
  kSlotBoolean,
  kSlotExtentMode,
};

enum class BooleanOp : std::uint8_t { kNewBody = 0, kJoin = 1, kCut = 2, kIntersect = 3 };
enum class ExtentMode : std::uint8_t { kOneSided = 0, kSymmetric = 1, kTwoSided = 2 };

std::string_view to_string(CadKind kind);
CadKind parse_cad_kind(std::string_view name);
std::string_view slot_name(std::size_t slot);

using CadParams = std::array<int, kCadParamCount>;
using SlotMask = std::array<bool, kCadParamCount>;

const SlotMask& usage_mask(CadKind kind);

struct CadCommand {
  CadKind kind = CadKind::kEos;
  CadParams params = unused();

  static constexpr CadParams unused() {
    CadParams p{};
    p.fill(kUnusedBin);
    return p;
  }
  friend bool operator==(const CadCommand&, const CadCommand&) = default;
};

// Commands padded with EOS to a fixed model length.
struct CadSequence {
  std::vector<CadCommand> commands;

  std::span<const CadCommand> content() const;
  std::size_t size() const { return commands.size(); }
  // Content re-padded (or checked) to `length`. Throws LengthExceededError when
  // the content plus its EOS does not fit.
  CadSequence padded(std::size_t length) const;
  friend bool operator==(const CadSequence&, const CadSequence&) = default;
};

CadSequence make_cad_sequence(std::span<const CadCommand> content,
                              std::size_t length = kDefaultCadLength);

enum class SlotType { kContinuous, kPeriodic, kEnumeration };

struct ParamRange {
  SlotType type = SlotType::kContinuous;
  double low = 0.0;
  double high = 0.0;
  int cardinality = kNumBins;  // number of legal bins

  bool is_enumeration() const { return type == SlotType::kEnumeration; }
};

// Physical range of a slot. Continuous slots dequantize as
// low + bin * (high - low) / 255; angle slots are periodic with step 2*pi/256 so
// that 0 and multiples of pi/2 are exact bins.
ParamRange param_range(std::size_t slot);
double dequantize_param(std::size_t slot, int bin);
int quantize_param(std::size_t slot, double value);

enum class Violation {
  kEmpty,
  kExtrudeWithoutLoop,
  kCurveOutsideLoop,
  kEmptyLoop,
  kOpenLoop,
  kParameterOutOfRange,
  kFirstExtrudeNotNewBody,
  kDanglingSketch,
  kDegenerateGeometry,
};

std::string_view to_string(Violation v);

struct ViolationEntry {
  Violation kind;
  std::size_t position;
  std::string detail;
};

// Loop closure tolerance, in quantization bins.
inline constexpr double kCloseTolerance = 2.0;

// Grammar and geometry checks. An empty result means the sequence is valid.
//
// Sketch loops use the cyclic endpoint convention: each Line/Arc carries its
// end point and starts where the previous curve of the loop ended; the first
// curve starts at the end of the last one. A loop is therefore closed by
// construction and is rejected as open when it cannot bound a region: a curve
// whose ends are within kCloseTolerance bins of each other, a Line-only loop
// with fewer than three curves, or a Circle sharing its loop with other curves.
std::vector<ViolationEntry> validate_cad_sequence(const CadSequence& seq);
inline bool is_valid(const CadSequence& seq) { return validate_cad_sequence(seq).empty(); }

// Combines decoder outputs: keeps only the slots the kind uses and truncates at
// the first EOS. Throws ContractError on length mismatch.
CadSequence merge_outputs(std::span<const CadKind> kinds, std::span<const CadParams> args);

// Kinds match everywhere and every used slot differs by strictly less than eta.
bool sequence_equal_within(const CadSequence& a, const CadSequence& b, int eta);

// Standalone text form: one command per line, kind name followed by 15 integers.
void write_cad_text(std::ostream& out, const CadSequence& seq);
CadSequence read_cad_text(std::istream& in, std::size_t length = kDefaultCadLength);

}  // namespace vdcad
