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
#include "vdcad/svg_core.hpp"

#include <algorithm>
#include <cmath>

#include "vdcad/errors.hpp"

namespace vdcad {

std::string_view to_string(SvgKind kind) {
  switch (kind) {
    case SvgKind::kSos: return "SOS";
    case SvgKind::kLineTo: return "L";
    case SvgKind::kCubic: return "C";
    case SvgKind::kEos: return "EOS";
  }
  return "?";
}

std::string_view to_string(ViewLabel view) {
  switch (view) {
    case ViewLabel::kFront: return "Front";
    case ViewLabel::kTop: return "Top";
    case ViewLabel::kRight: return "Right";
    case ViewLabel::kIsometric: return "Isometric";
  }
  return "?";
}

SvgKind parse_svg_kind(std::string_view name) {
  for (auto kind : {SvgKind::kSos, SvgKind::kLineTo, SvgKind::kCubic, SvgKind::kEos}) {
    if (to_string(kind) == name) return kind;
  }
  throw SchemaError("unknown svg command kind '" + std::string(name) + "'");
}

ViewLabel parse_view_label(std::string_view name) {
  for (auto view : kAllViews) {
    if (to_string(view) == name) return view;
  }
  throw SchemaError("unknown view label '" + std::string(name) + "'");
}

std::span<const SvgToken> DrawingSequence::content() const {
  auto eos = std::find_if(tokens.begin(), tokens.end(),
                          [](const SvgToken& t) { return t.kind == SvgKind::kEos; });
  return {tokens.data(), static_cast<std::size_t>(eos - tokens.begin())};
}

int quantize_coord(double v) {
  if (!(v >= 0.0 && v <= kViewboxSize)) {
    throw RangeError("coordinate " + std::to_string(v) + " outside [0, 200]");
  }
  // std::round rounds halves away from zero.
  return static_cast<int>(std::round(v / kViewboxSize * (kNumBins - 1)));
}

double dequantize_coord(int bin) {
  if (bin == kUnusedBin) throw RangeError("unused slot has no coordinate");
  if (bin < 0 || bin >= kNumBins) throw RangeError("bin " + std::to_string(bin) + " out of range");
  return bin * kViewboxSize / (kNumBins - 1);
}

namespace {

constexpr std::array<bool, kSvgParamCount> kLineMask = {true, true, false, false,
                                                        false, false, true, true};

bool slot_used(SvgKind kind, std::size_t slot) {
  switch (kind) {
    case SvgKind::kLineTo: return kLineMask[slot];
    case SvgKind::kCubic: return true;
    default: return false;
  }
}

}  // namespace

SvgToken make_token(SvgKind kind,
                    const std::optional<std::array<double, kSvgParamCount>>& raw) {
  const bool needs_params = kind == SvgKind::kLineTo || kind == SvgKind::kCubic;
  if (needs_params != raw.has_value()) {
    throw ContractError(std::string("make_token: parameters ") +
                        (needs_params ? "missing for " : "given for ") +
                        std::string(to_string(kind)));
  }
  SvgToken token;
  token.kind = kind;
  if (raw) {
    for (std::size_t i = 0; i < kSvgParamCount; ++i) {
      if (slot_used(kind, i)) token.params[i] = quantize_coord((*raw)[i]);
    }
  }
  return token;
}

bool token_well_formed(const SvgToken& token) {
  for (std::size_t i = 0; i < kSvgParamCount; ++i) {
    const int b = token.params[i];
    if (slot_used(token.kind, i)) {
      if (b < 0 || b >= kNumBins) return false;
    } else if (b != kUnusedBin) {
      return false;
    }
  }
  return true;
}

DrawingSequence pad_drawing(std::span<const SvgToken> tokens, ViewLabel view) {
  if (tokens.size() + 1 > kDrawingLength) {
    throw LengthExceededError(tokens.size(), kDrawingLength - 1);
  }
  for (const auto& t : tokens) {
    if (t.kind != SvgKind::kLineTo && t.kind != SvgKind::kCubic) {
      throw ContractError("pad_drawing: content tokens must be LineTo or Cubic");
    }
  }
  DrawingSequence seq;
  seq.view = view;
  seq.tokens.assign(tokens.begin(), tokens.end());
  seq.tokens.resize(kDrawingLength, SvgToken{});
  return seq;
}

}  // namespace vdcad
