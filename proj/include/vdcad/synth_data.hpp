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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vdcad/cad_core.hpp"
#include "vdcad/dataset.hpp"
#include "vdcad/geom_kernel.hpp"
#include "vdcad/svg_ingest.hpp"

namespace vdcad {

enum class SketchPlane { kXY, kXZ, kYZ };

// Generator vocabulary. Bin ranges are inclusive quantization bins.
struct GenSpec {
  int min_extrusions = 1;
  int max_extrusions = 2;
  bool rectangles = true;
  bool circles = true;
  std::vector<SketchPlane> planes = {SketchPlane::kXY, SketchPlane::kXZ, SketchPlane::kYZ};
  bool vary_extent_mode = true;
  std::array<int, 2> origin_bins = {100, 156};
  std::array<int, 2> corner_bins = {64, 192};
  int min_side_bins = 24;
  std::array<int, 2> radius_bins = {20, 90};
  std::array<int, 2> extent_bins = {160, 240};

  void validate() const;  // throws ContractError
};

// Accepts "default", "rect", "circle", "single", "rect-single", or a
// comma-separated list of key=value overrides (extrusions=1-2, profiles=rect|circle,
// planes=xy|xz|yz).
GenSpec parse_gen_spec(std::string_view text);

// Deterministic in (spec, seed). The first extrusion creates a body, a second
// one joins or cuts.
CadSequence random_cad_sequence(const GenSpec& spec, std::uint64_t seed);

struct Segment3 {
  Vec3 a;
  Vec3 b;
};

// center + u cos t + v sin t
struct Circle3 {
  Vec3 center;
  Vec3 u;
  Vec3 v;
};

// Lateral surface of an extruded circle: `base` swept along `axis`.
struct Cylinder3 {
  Circle3 base;
  Vec3 axis;
};

struct Wireframe {
  std::vector<Segment3> segments;
  std::vector<Circle3> circles;
  std::vector<Cylinder3> cylinders;
};

// Profile edges at both end planes plus lateral edges at polygon vertices.
// Circular profiles contribute two circles and a cylinder whose silhouettes
// are resolved per view.
Wireframe wireframe_edges(const Solid& solid);

// Screen coordinates with y pointing down. Front (x, -z), Top (x, -y),
// Right (y, -z); Isometric u = (x - y) cos 30, v = (x + y) sin 30 - z.
Vec2 project_point(const Vec3& p, ViewLabel view);

// Four cubic arcs of the affine image of a circle with conjugate
// semi-diameters u and v.
std::array<Segment, 4> conjugate_ellipse_to_beziers(const Vec2& center, const Vec2& u, const Vec2& v);
std::array<Segment, 4> ellipse_to_beziers(const Vec2& center, double semi_a, double semi_b, double rotation);

// Projected wireframe as 2D segments: circles become cubics or, seen edge-on,
// a single line; zero-length and duplicate segments are dropped.
std::vector<Segment> project_wireframe(const Wireframe& wire, ViewLabel view);

// All four views through the full ingest pipeline. `seed` permutes segment
// order before ingest.
std::map<ViewLabel, DrawingSequence> render_views(const CadSequence& seq, std::uint64_t seed);

// One record per index; candidates whose drawings overflow or whose solid has
// no sampleable boundary are redrawn from the next sub-seed.
Record generate_record(const GenSpec& spec, std::uint64_t seed, const std::string& id);
std::vector<Record> generate_dataset(const GenSpec& spec, std::size_t count, std::uint64_t seed);

}  // namespace vdcad
