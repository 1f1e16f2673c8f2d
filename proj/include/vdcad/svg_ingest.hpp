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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vdcad/svg_core.hpp"

namespace vdcad {

using Point2 = Eigen::Vector2d;

enum class SegmentKind { kLine, kCubic };

// One drawing primitive in absolute coordinates. Control points are only
// meaningful for cubics.
struct Segment {
  SegmentKind kind = SegmentKind::kLine;
  Point2 start = Point2::Zero();
  Point2 c1 = Point2::Zero();
  Point2 c2 = Point2::Zero();
  Point2 end = Point2::Zero();

  static Segment line(const Point2& a, const Point2& b);
  static Segment cubic(const Point2& a, const Point2& c1, const Point2& c2, const Point2& b);

  Segment reversed() const;
  bool degenerate() const;
  Point2 eval(double t) const;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Contour {
  std::vector<Segment> segments;
  bool closed = false;
};

struct ViewBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double width = kViewboxSize;
  double height = kViewboxSize;
};

// Endpoint matching tolerance in normalized drawing units.
inline constexpr double kJoinTolerance = 1e-3;

// SVG path grammar subset: M L H V C Z (both cases) with implicit repeats.
// Throws UnsupportedCommandError for A/Q/S/T and ParseError with a byte offset
// for anything else malformed.
std::vector<Segment> parse_path_data(std::string_view d);

struct SvgDocument {
  std::optional<ViewBox> viewbox;
  std::vector<std::string> path_data;
};

// Extracts the root viewBox and every <path d="..."> from an SVG document.
// Other elements and attributes are ignored.
SvgDocument parse_svg_document(std::string_view text);

// Uniform scale into [0,200]^2; the source min corner maps to the origin and
// the shorter axis is centered.
std::vector<Segment> normalize_viewbox(std::span<const Segment> segments, const ViewBox& box);

// Moves every coordinate onto the nearest quantization bin centre and drops
// segments that collapse to a point.
std::vector<Segment> snap_to_bins(std::span<const Segment> segments);

// Splits the segments into maximal chains over the endpoint graph. Every choice
// depends on geometry only, so the result does not depend on input order or
// segment direction.
std::vector<Contour> build_contours(std::span<const Segment> segments,
                                    double join_tolerance = kJoinTolerance);

// Shoelace area including the exact cubic contribution. Positive means
// clockwise on screen (y axis pointing down).
double signed_area(const Contour& contour);

// Sorts contours by distance of their nearest vertex to the origin, orients
// closed contours clockwise on screen and starts them at the vertex nearest the
// origin.
std::vector<Contour> reorder_contours(std::vector<Contour> contours);

// normalize -> snap -> contours -> reorder -> tokens -> pad.
DrawingSequence drawing_from_segments(std::span<const Segment> segments, const ViewBox& box,
                                      ViewLabel view);
DrawingSequence drawing_from_svg(std::string_view svg_text, ViewLabel view);
DrawingSequence drawing_from_svg_file(const std::string& path, ViewLabel view);

// Dequantized segments of a drawing, in token order.
std::vector<Segment> segments_from_drawing(const DrawingSequence& drawing);

// SVG document for a drawing, one path element per connected run of tokens.
std::string drawing_to_svg(const DrawingSequence& drawing);

}  // namespace vdcad
