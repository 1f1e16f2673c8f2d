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
#include "vdcad/geom_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <Eigen/Geometry>

#include "vdcad/errors.hpp"
#include "vdcad/random.hpp"

namespace vdcad {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double loop_area(const std::vector<Vec2>& loop) {
  double twice = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) twice += cross2(loop[i], loop[(i + 1) % loop.size()]);
  return twice / 2.0;
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

bool crossing_parity(const Vec2& p, const std::vector<Vec2>& loop) {
  bool inside = false;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

// cos/sin with exact zeros and ones at multiples of pi/2.
std::pair<double, double> exact_cos_sin(double angle) {
  double c = std::cos(angle);
  double s = std::sin(angle);
  auto snap = [](double v) {
    if (std::abs(v) < 1e-15) return 0.0;
    if (std::abs(v - 1.0) < 1e-15) return 1.0;
    if (std::abs(v + 1.0) < 1e-15) return -1.0;
    return v;
  };
  return {snap(c), snap(s)};
}

}  // namespace

double Profile::area() const {
  double total = 0.0;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    int depth = 0;
    for (std::size_t j = 0; j < loops.size(); ++j) {
      if (j != i && crossing_parity(loops[i].front(), loops[j])) ++depth;
    }
    const double a = std::abs(loop_area(loops[i]));
    total += depth % 2 == 0 ? a : -a;
  }
  return std::max(total, 0.0);
}

std::pair<Vec2, Vec2> Profile::bounds() const {
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& loop : loops) {
    for (const auto& p : loop) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  return {lo, hi};
}

SketchFrame sketch_frame(double theta, double gamma, const Vec3& origin) {
  const auto [ct, st] = exact_cos_sin(theta);
  const auto [cg, sg] = exact_cos_sin(gamma);
  Eigen::Matrix3d ry;
  ry << ct, 0, st, 0, 1, 0, -st, 0, ct;
  Eigen::Matrix3d rz;
  rz << cg, -sg, 0, sg, cg, 0, 0, 0, 1;
  const Eigen::Matrix3d r = rz * ry;
  SketchFrame f;
  f.origin = origin;
  f.x_axis = r.col(0);
  f.y_axis = r.col(1);
  f.normal = r.col(2);
  return f;
}

std::pair<double, double> ExtrusionBody::extent_interval() const {
  switch (mode) {
    case ExtentMode::kOneSided: return {std::min(0.0, extent1), std::max(0.0, extent1)};
    case ExtentMode::kSymmetric: return {-std::abs(extent1) / 2, std::abs(extent1) / 2};
    case ExtentMode::kTwoSided: return {std::min(-extent2, extent1), std::max(-extent2, extent1)};
  }
  return {0.0, 0.0};
}

Vec3 ExtrusionBody::to_world(const Vec2& p, double depth) const {
  return frame.origin + scale * (p.x() * frame.x_axis + p.y() * frame.y_axis) + depth * frame.normal;
}

std::pair<Vec3, Vec3> ExtrusionBody::bounds() const {
  const auto [plo, phi] = profile.bounds();
  const auto [wlo, whi] = extent_interval();
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (double u : {plo.x(), phi.x()}) {
    for (double v : {plo.y(), phi.y()}) {
      for (double w : {wlo, whi}) {
        const Vec3 p = to_world(Vec2(u, v), w);
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
    }
  }
  return {lo, hi};
}

std::pair<Vec3, Vec3> Solid::bounds() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const auto& b : bodies) {
    const auto [blo, bhi] = b.bounds();
    lo = lo.cwiseMin(blo);
    hi = hi.cwiseMax(bhi);
  }
  return {lo, hi};
}

double Solid::on_tolerance() const {
  const auto [lo, hi] = bounds();
  return kOnTolerance * (hi - lo).norm();
}

bool point_in_profile(const Vec2& pt, const Profile& profile, double boundary_tolerance) {
  if (boundary_tolerance > 0.0) {
    for (const auto& loop : profile.loops) {
      for (std::size_t i = 0; i < loop.size(); ++i) {
        if (segment_distance(pt, loop[i], loop[(i + 1) % loop.size()]) <= boundary_tolerance) return true;
      }
    }
  }
  bool inside = false;
  for (const auto& loop : profile.loops) inside ^= crossing_parity(pt, loop);
  return inside;
}

bool point_in_body(const Vec3& pt, const ExtrusionBody& body, double tol) {
  const Vec3 d = pt - body.frame.origin;
  const double w = d.dot(body.frame.normal);
  const auto [lo, hi] = body.extent_interval();
  if (w < lo - tol || w > hi + tol) return false;
  const Vec2 uv(d.dot(body.frame.x_axis) / body.scale, d.dot(body.frame.y_axis) / body.scale);
  return point_in_profile(uv, body.profile, tol / body.scale);
}

bool point_in_solid(const Vec3& pt, const Solid& solid, double tol) {
  bool inside = false;
  for (std::size_t i = 0; i < solid.bodies.size(); ++i) {
    const auto& body = solid.bodies[i];
    if (i == 0) {
      inside = point_in_body(pt, body, tol);
      continue;
    }
    switch (body.op) {
      case BooleanOp::kNewBody:
      case BooleanOp::kJoin: inside = inside || point_in_body(pt, body, tol); break;
      case BooleanOp::kCut: inside = inside && !point_in_body(pt, body, tol); break;
      case BooleanOp::kIntersect: inside = inside && point_in_body(pt, body, tol); break;
    }
  }
  return inside;
}

bool point_in_solid(const Vec3& pt, const Solid& solid) {
  return point_in_solid(pt, solid, 0.25 * solid.on_tolerance());
}

// ---------------------------------------------------------------------------
// Reconstruction

namespace {

Vec2 sketch_point(const CadCommand& c) {
  return Vec2(dequantize_param(kSlotX, c.params[kSlotX]), dequantize_param(kSlotY, c.params[kSlotY]));
}

int segments_for_arc(double radius, double sweep, double chord_tol) {
  if (radius <= chord_tol) return 8;
  const double step = 2.0 * std::acos(std::clamp(1.0 - chord_tol / radius, -1.0, 1.0));
  return std::clamp(static_cast<int>(std::ceil(std::abs(sweep) / step)), 4, 4096);
}

// Appends the arc from `start` to `end` without its end point.
void append_arc(std::vector<Vec2>& out, const Vec2& start, const Vec2& end, double sweep, bool ccw,
                double chord_tol) {
  const Vec2 chord = end - start;
  const double c = chord.norm();
  const double half = sweep / 2.0;
  const double radius = c / (2.0 * std::sin(half));
  const Vec2 left(-chord.y() / c, chord.x() / c);
  const double h = c / (2.0 * std::tan(half));
  const Vec2 center = 0.5 * (start + end) + (ccw ? h : -h) * left;
  const double a0 = std::atan2(start.y() - center.y(), start.x() - center.x());
  const int n = segments_for_arc(radius, sweep, chord_tol);
  const double dir = ccw ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) {
    const double a = a0 + dir * sweep * k / n;
    out.push_back(k == 0 ? start : Vec2(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a)));
  }
}

Profile build_profile(const std::vector<std::vector<const CadCommand*>>& loops) {
  // Bounding box of the defining points sets the chord tolerance.
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& loop : loops) {
    for (const CadCommand* c : loop) {
      const Vec2 p = sketch_point(*c);
      const double r = c->kind == CadKind::kCircle ? dequantize_param(kSlotRadius, c->params[kSlotRadius]) : 0.0;
      lo = lo.cwiseMin(p - Vec2::Constant(r));
      hi = hi.cwiseMax(p + Vec2::Constant(r));
    }
  }
  const double chord_tol = std::max(kChordTolerance * (hi - lo).norm(), 1e-9);

  std::vector<std::vector<Vec2>> polylines;
  std::vector<std::optional<Circle2>> circles;
  for (const auto& loop : loops) {
    std::vector<Vec2> pts;
    if (loop.front()->kind == CadKind::kCircle) {
      const Vec2 center = sketch_point(*loop.front());
      const double r = dequantize_param(kSlotRadius, loop.front()->params[kSlotRadius]);
      const int n = segments_for_arc(r, 2.0 * std::numbers::pi, chord_tol);
      for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * k / n;
        pts.emplace_back(center.x() + r * std::cos(a), center.y() + r * std::sin(a));
      }
      circles.push_back(Circle2{center, r});
    } else {
      const std::size_t n = loop.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 start = sketch_point(*loop[(i + n - 1) % n]);
        const Vec2 end = sketch_point(*loop[i]);
        if (loop[i]->kind == CadKind::kArc) {
          const double sweep = std::abs(dequantize_param(kSlotAlpha, loop[i]->params[kSlotAlpha]));
          append_arc(pts, start, end, sweep, loop[i]->params[kSlotArcFlag] == 1, chord_tol);
        } else {
          pts.push_back(start);
        }
      }
      circles.emplace_back();
    }
    polylines.push_back(std::move(pts));
  }
  // Outer boundary first.
  std::vector<std::size_t> order(polylines.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(loop_area(polylines[a])) > std::abs(loop_area(polylines[b]));
  });
  Profile profile;
  for (std::size_t i : order) {
    profile.loops.push_back(std::move(polylines[i]));
    profile.circles.push_back(circles[i]);
  }
  return profile;
}

}  // namespace

ReconstructResult reconstruct(const CadSequence& seq) {
  ReconstructResult result;
  const auto violations = validate_cad_sequence(seq);
  if (!violations.empty()) {
    result.invalid = InvalidityReason{violations.front().kind, violations.front().detail};
    return result;
  }
  Solid solid;
  std::vector<std::vector<const CadCommand*>> loops;
  for (const auto& cmd : seq.content()) {
    switch (cmd.kind) {
      case CadKind::kSol: loops.emplace_back(); break;
      case CadKind::kLine:
      case CadKind::kArc:
      case CadKind::kCircle: loops.back().push_back(&cmd); break;
      case CadKind::kExtrude: {
        const auto& p = cmd.params;
        ExtrusionBody body;
        body.profile = build_profile(loops);
        const Vec3 origin(dequantize_param(kSlotPx, p[kSlotPx]), dequantize_param(kSlotPy, p[kSlotPy]),
                          dequantize_param(kSlotPs, p[kSlotPs]));
        body.frame = sketch_frame(dequantize_param(kSlotTheta, p[kSlotTheta]),
                                  dequantize_param(kSlotGamma, p[kSlotGamma]), origin);
        body.scale = dequantize_param(kSlotScale, p[kSlotScale]);
        body.extent1 = dequantize_param(kSlotExtent1, p[kSlotExtent1]);
        body.extent2 = dequantize_param(kSlotExtent2, p[kSlotExtent2]);
        body.op = static_cast<BooleanOp>(p[kSlotBoolean]);
        body.mode = static_cast<ExtentMode>(p[kSlotExtentMode]);
        if (body.profile.area() <= 0.0) {
          result.invalid = InvalidityReason{Violation::kDegenerateGeometry, "profile encloses no area"};
          return result;
        }
        solid.bodies.push_back(std::move(body));
        loops.clear();
        break;
      }
      case CadKind::kEos: break;
    }
  }
  result.solid = std::move(solid);
  return result;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

struct Surface {
  std::size_t body;
  int kind;  // 0 = wall, 1 = low cap, 2 = high cap
  std::size_t loop;
  std::size_t edge;
  double area;
};

}  // namespace

PointCloud sample_shape(const Solid& solid, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ContractError("sample_shape: count must be positive");
  if (solid.bodies.empty()) throw SamplingError("solid has no bodies");
  const double tau = solid.on_tolerance();
  const double band = 0.25 * tau;

  std::vector<Surface> surfaces;
  std::vector<double> cumulative;
  double total = 0.0;
  auto add = [&](Surface s) {
    if (s.area <= 0.0) return;
    total += s.area;
    surfaces.push_back(s);
    cumulative.push_back(total);
  };
  for (std::size_t b = 0; b < solid.bodies.size(); ++b) {
    const auto& body = solid.bodies[b];
    const auto [lo, hi] = body.extent_interval();
    for (std::size_t l = 0; l < body.profile.loops.size(); ++l) {
      const auto& loop = body.profile.loops[l];
      for (std::size_t e = 0; e < loop.size(); ++e) {
        const double len = (loop[(e + 1) % loop.size()] - loop[e]).norm();
        add({b, 0, l, e, len * body.scale * (hi - lo)});
      }
    }
    const double cap = body.profile.area() * body.scale * body.scale;
    add({b, 1, 0, 0, cap});
    add({b, 2, 0, 0, cap});
  }
  if (surfaces.empty()) throw SamplingError("solid has no surface area");

  std::mt19937_64 rng(seed);
  PointCloud cloud;
  cloud.points.reserve(count);
  cloud.normals.reserve(count);
  const std::size_t max_attempts = 1000 * count + 20000;
  std::size_t attempts = 0;
  while (cloud.points.size() < count) {
    if (++attempts > max_attempts || (attempts > 20000 && cloud.points.empty())) {
      throw SamplingError("composed solid has no sampleable boundary");
    }
    const double r = uniform01(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    const Surface& s = surfaces[std::min<std::size_t>(it - cumulative.begin(), surfaces.size() - 1)];
    const auto& body = solid.bodies[s.body];
    const auto [lo, hi] = body.extent_interval();
    Vec3 p;
    Vec3 n;
    if (s.kind == 0) {
      const auto& loop = body.profile.loops[s.loop];
      const Vec2& a = loop[s.edge];
      const Vec2& b = loop[(s.edge + 1) % loop.size()];
      const double t = uniform01(rng);
      const double w = uniform(rng, lo, hi);
      p = body.to_world(a + t * (b - a), w);
      const Vec2 e = (b - a).normalized();
      n = (e.y() * body.frame.x_axis - e.x() * body.frame.y_axis).normalized();
    } else {
      const auto [plo, phi] = body.profile.bounds();
      Vec2 uv;
      int tries = 0;
      do {
        uv = Vec2(uniform(rng, plo.x(), phi.x()), uniform(rng, plo.y(), phi.y()));
        if (++tries > 100000) throw SamplingError("cap rejection sampling failed");
      } while (!point_in_profile(uv, body.profile));
      p = body.to_world(uv, s.kind == 1 ? lo : hi);
      n = s.kind == 1 ? -body.frame.normal : body.frame.normal;
    }
    if (point_in_solid(p - tau * n, solid, band) != point_in_solid(p + tau * n, solid, band)) {
      cloud.points.push_back(p);
      cloud.normals.push_back(n);
    }
  }
  return cloud;
}

void write_point_cloud(std::ostream& out, const PointCloud& cloud) {
  const auto old = out.precision(17);
  for (const auto& p : cloud.points) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  out.precision(old);
}

}  // namespace vdcad
