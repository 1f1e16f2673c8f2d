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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vdcad {

// Drawing coordinates live in a [0, kViewboxSize]^2 viewbox and are quantized
// to 8-bit bins. Bin kUnusedBin marks a parameter slot the command ignores.
inline constexpr double kViewboxSize = 200.0;
inline constexpr int kNumBins = 256;
inline constexpr int kUnusedBin = 256;
inline constexpr int kNumCategories = kNumBins + 1;
inline constexpr std::size_t kDrawingLength = 100;
inline constexpr std::size_t kSvgParamCount = 8;

enum class SvgKind : std::uint8_t { kSos = 0, kLineTo = 1, kCubic = 2, kEos = 3 };
inline constexpr int kNumSvgKinds = 4;

enum class ViewLabel : std::uint8_t { kFront = 0, kTop = 1, kRight = 2, kIsometric = 3 };
inline constexpr int kNumViews = 4;
inline constexpr std::array<ViewLabel, kNumViews> kAllViews = {
    ViewLabel::kFront, ViewLabel::kTop, ViewLabel::kRight, ViewLabel::kIsometric};

std::string_view to_string(SvgKind kind);
std::string_view to_string(ViewLabel view);
SvgKind parse_svg_kind(std::string_view name);
ViewLabel parse_view_label(std::string_view name);

// Slot order: x1, y1, cx1, cy1, cx2, cy2, x2, y2.
using SvgParams = std::array<int, kSvgParamCount>;

struct SvgToken {
  SvgKind kind = SvgKind::kEos;
  SvgParams params = unused_params();

  static constexpr SvgParams unused_params() {
    SvgParams p{};
    p.fill(kUnusedBin);
    return p;
  }
  friend bool operator==(const SvgToken&, const SvgToken&) = default;
};

struct DrawingSequence {
  ViewLabel view = ViewLabel::kFront;
  std::vector<SvgToken> tokens;  // always kDrawingLength long

  // Tokens before the first EOS.
  std::span<const SvgToken> content() const;
  friend bool operator==(const DrawingSequence&, const DrawingSequence&) = default;
};

// round(v / 200 * 255), halves away from zero. Throws RangeError outside [0, 200].
int quantize_coord(double v);
// b * 200 / 255. Throws RangeError for kUnusedBin or anything outside 0..255.
double dequantize_coord(int bin);

// Builds a token from raw drawing coordinates. `raw` must be present exactly
// for LineTo and Cubic; LineTo ignores the control-point slots.
SvgToken make_token(SvgKind kind, const std::optional<std::array<double, kSvgParamCount>>& raw);

// True when the slot usage pattern matches the kind.
bool token_well_formed(const SvgToken& token);

// Appends EOS and EOS padding up to kDrawingLength. The EOS marker must fit, so
// at most kDrawingLength - 1 content tokens are accepted.
DrawingSequence pad_drawing(std::span<const SvgToken> tokens, ViewLabel view);

}  // namespace vdcad
