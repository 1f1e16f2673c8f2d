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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vdcad/cad_core.hpp"

namespace vdcad {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr std::size_t kDefaultSampleCount = 2000;
// Arc and circle chord tolerance relative to the profile bounding-box diagonal.
inline constexpr double kChordTolerance = 1e-3;
// Surface offset used for boundary classification, relative to the solid
// bounding-box diagonal.
inline constexpr double kOnTolerance = 1e-4;

// Closed polylines in sketch coordinates; the closing edge is implicit.
// loops.front() is the outer boundary (largest absolute area).
struct Circle2 {
  Vec2 center;
  double radius;
};

struct Profile {
  std::vector<std::vector<Vec2>> loops;
  // Exact circle behind each loop that came from a Circle command; parallel
  // to loops.
  std::vector<std::optional<Circle2>> circles;

  double area() const;  // even-odd area
  std::pair<Vec2, Vec2> bounds() const;
};

// Sketch plane: origin plus orthonormal in-plane axes and normal.
struct SketchFrame {
  Vec3 origin = Vec3::Zero();
  Vec3 x_axis = Vec3::UnitX();
  Vec3 y_axis = Vec3::UnitY();
  Vec3 normal = Vec3::UnitZ();
};

// theta tilts the normal away from +z, gamma turns the tilted frame about +z:
// the frame axes are Rz(gamma) * Ry(theta) applied to the world axes.
SketchFrame sketch_frame(double theta, double gamma, const Vec3& origin);

struct ExtrusionBody {
  Profile profile;
  SketchFrame frame;
  double scale = 1.0;
  double extent1 = 1.0;
  double extent2 = 0.0;
  BooleanOp op = BooleanOp::kNewBody;
  ExtentMode mode = ExtentMode::kOneSided;

  // Signed distances along the normal covered by the body, low <= high.
  std::pair<double, double> extent_interval() const;
  Vec3 to_world(const Vec2& sketch_point, double depth) const;
  std::pair<Vec3, Vec3> bounds() const;
};

struct Solid {
  std::vector<ExtrusionBody> bodies;

  std::pair<Vec3, Vec3> bounds() const;
  double on_tolerance() const;  // kOnTolerance times the bounding-box diagonal
};

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // sampling normal per point; may be empty
};

// Even-odd containment; points within `boundary_tolerance` of an edge count as
// inside.
bool point_in_profile(const Vec2& pt, const Profile& profile, double boundary_tolerance = 0.0);

bool point_in_body(const Vec3& pt, const ExtrusionBody& body, double boundary_tolerance);

// Boolean fold over the bodies in order: join ORs, cut subtracts, intersect
// ANDs. The boundary band defaults to a quarter of the solid's on-tolerance.
bool point_in_solid(const Vec3& pt, const Solid& solid);
bool point_in_solid(const Vec3& pt, const Solid& solid, double boundary_tolerance);

struct InvalidityReason {
  Violation kind;
  std::string detail;
};

struct ReconstructResult {
  std::optional<Solid> solid;
  std::optional<InvalidityReason> invalid;

  bool ok() const { return solid.has_value(); }
};

// Validates, dequantizes and assembles extrusion bodies. Invalidity is a
// value, not an error.
ReconstructResult reconstruct(const CadSequence& seq);

// Thrown by sample_shape when the composed solid has no boundary to sample.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Area-uniform surface sampling of the composed solid. Candidates come from
// every body's walls and caps and are kept when membership flips across the
// surface. Deterministic in (solid, count, seed).
PointCloud sample_shape(const Solid& solid, std::size_t count, std::uint64_t seed);

void write_point_cloud(std::ostream& out, const PointCloud& cloud);

}  // namespace vdcad
