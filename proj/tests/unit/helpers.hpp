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

// Shared builders for the unit tests.

#include <vector>

#include "vdcad/cad_core.hpp"
#include "vdcad/geom_kernel.hpp"

namespace vdcad::testing {

inline CadCommand cmd(CadKind kind) {
  CadCommand c;
  c.kind = kind;
  return c;
}

inline CadCommand line_to(int x, int y) {
  CadCommand c = cmd(CadKind::kLine);
  c.params[kSlotX] = x;
  c.params[kSlotY] = y;
  return c;
}

inline CadCommand circle(int x, int y, int r) {
  CadCommand c = cmd(CadKind::kCircle);
  c.params[kSlotX] = x;
  c.params[kSlotY] = y;
  c.params[kSlotRadius] = r;
  return c;
}

// Extrude on the xy plane (theta = gamma = 0) with scale bin 128.
inline CadCommand extrude(int e1, BooleanOp op = BooleanOp::kNewBody, ExtentMode mode = ExtentMode::kOneSided,
                          int e2 = 128, int px = 128, int py = 128, int ps = 128) {
  CadCommand c = cmd(CadKind::kExtrude);
  c.params[kSlotTheta] = quantize_param(kSlotTheta, 0.0);
  c.params[kSlotGamma] = quantize_param(kSlotGamma, 0.0);
  c.params[kSlotPx] = px;
  c.params[kSlotPy] = py;
  c.params[kSlotPs] = ps;
  c.params[kSlotScale] = 128;
  c.params[kSlotExtent1] = e1;
  c.params[kSlotExtent2] = e2;
  c.params[kSlotBoolean] = static_cast<int>(op);
  c.params[kSlotExtentMode] = static_cast<int>(mode);
  return c;
}

// Axis-aligned square loop from (lo, lo) to (hi, hi) in the cyclic endpoint
// convention.
inline std::vector<CadCommand> square_loop(int lo, int hi) {
  return {cmd(CadKind::kSol), line_to(hi, lo), line_to(hi, hi), line_to(lo, hi), line_to(lo, lo)};
}

inline CadSequence square_extrude(int lo = 0, int hi = 255, int e1 = 255) {
  auto content = square_loop(lo, hi);
  content.push_back(extrude(e1));
  return make_cad_sequence(content);
}

// Sequence whose solid is an exact cube of side 256/255: sketch [-1, 1]^2 at
// scale 128/255, extruded two-sided over [-127/255, 129/255].
inline CadSequence cube_sequence() {
  auto content = square_loop(0, 255);
  CadCommand e = extrude(192, BooleanOp::kNewBody, ExtentMode::kTwoSided, 191);
  e.params[kSlotScale] = 64;
  content.push_back(e);
  return make_cad_sequence(content);
}

inline Profile rect_profile(double x0, double y0, double x1, double y1) {
  Profile p;
  p.loops.push_back({Vec2(x0, y0), Vec2(x1, y0), Vec2(x1, y1), Vec2(x0, y1)});
  p.circles.emplace_back();
  return p;
}

inline ExtrusionBody box_body(const Vec3& lo, const Vec3& hi, BooleanOp op = BooleanOp::kNewBody) {
  ExtrusionBody b;
  b.profile = rect_profile(0.0, 0.0, hi.x() - lo.x(), hi.y() - lo.y());
  b.frame.origin = lo;
  b.extent1 = hi.z() - lo.z();
  b.op = op;
  return b;
}

inline Solid unit_cube() {
  Solid s;
  s.bodies.push_back(box_body(Vec3::Zero(), Vec3::Ones()));
  return s;
}

}  // namespace vdcad::testing
