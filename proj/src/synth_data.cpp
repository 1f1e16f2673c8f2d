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
#include "vdcad/synth_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "vdcad/errors.hpp"
#include "vdcad/random.hpp"

namespace vdcad {

void GenSpec::validate() const {
  if (min_extrusions < 1 || max_extrusions > 2 || min_extrusions > max_extrusions) {
    throw ContractError("gen spec: extrusion count must lie in 1..2");
  }
  if (!rectangles && !circles) throw ContractError("gen spec: no profile kind enabled");
  if (planes.empty()) throw ContractError("gen spec: no sketch plane enabled");
  auto check = [](const std::array<int, 2>& r, const char* what) {
    if (r[0] < 0 || r[1] > kNumBins - 1 || r[0] > r[1]) throw ContractError(std::string("gen spec: bad ") + what);
  };
  check(origin_bins, "origin range");
  check(corner_bins, "corner range");
  check(radius_bins, "radius range");
  check(extent_bins, "extent range");
  if (corner_bins[1] - corner_bins[0] < min_side_bins) throw ContractError("gen spec: corner range too small");
}

GenSpec parse_gen_spec(std::string_view text) {
  GenSpec spec;
  if (text.empty() || text == "default") return spec;
  if (text == "rect" || text == "rect-single") spec.circles = false;
  if (text == "circle") spec.rectangles = false;
  if (text == "single" || text == "rect-single") spec.max_extrusions = 1;
  if (text == "rect" || text == "rect-single" || text == "circle" || text == "single") {
    spec.validate();
    return spec;
  }
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("gen spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::vector<std::string> parts;
    std::stringstream vs(value);
    for (std::string p; std::getline(vs, p, '|');) parts.push_back(p);
    if (key == "extrusions") {
      const auto dash = value.find('-');
      spec.min_extrusions = std::stoi(value.substr(0, dash));
      spec.max_extrusions = dash == std::string::npos ? spec.min_extrusions : std::stoi(value.substr(dash + 1));
    } else if (key == "profiles") {
      spec.rectangles = std::find(parts.begin(), parts.end(), "rect") != parts.end();
      spec.circles = std::find(parts.begin(), parts.end(), "circle") != parts.end();
    } else if (key == "planes") {
      spec.planes.clear();
      for (const auto& p : parts) {
        if (p == "xy") spec.planes.push_back(SketchPlane::kXY);
        else if (p == "xz") spec.planes.push_back(SketchPlane::kXZ);
        else if (p == "yz") spec.planes.push_back(SketchPlane::kYZ);
        else throw InputError("gen spec: unknown plane '" + p + "'");
      }
    } else if (key == "extent_modes") {
      spec.vary_extent_mode = value != "one-sided";
    } else {
      throw InputError("gen spec: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

namespace {

CadCommand command(CadKind kind) {
  CadCommand c;
  c.kind = kind;
  return c;
}

void append_profile(std::vector<CadCommand>& out, const GenSpec& spec, std::mt19937_64& rng) {
  const bool rect = spec.rectangles && (!spec.circles || uniform01(rng) < 0.5);
  out.push_back(command(CadKind::kSol));
  if (rect) {
    const int lo = spec.corner_bins[0];
    const int hi = spec.corner_bins[1];
    const int x0 = uniform_int(rng, lo, hi - spec.min_side_bins);
    const int x1 = uniform_int(rng, x0 + spec.min_side_bins, hi);
    const int y0 = uniform_int(rng, lo, hi - spec.min_side_bins);
    const int y1 = uniform_int(rng, y0 + spec.min_side_bins, hi);
    // Cyclic endpoints: the loop starts at (x0, y0), the end of its last line.
    for (const auto& [x, y] : {std::pair{x1, y0}, std::pair{x1, y1}, std::pair{x0, y1}, std::pair{x0, y0}}) {
      CadCommand c = command(CadKind::kLine);
      c.params[kSlotX] = x;
      c.params[kSlotY] = y;
      out.push_back(c);
    }
  } else {
    CadCommand c = command(CadKind::kCircle);
    c.params[kSlotX] = uniform_int(rng, 112, 144);
    c.params[kSlotY] = uniform_int(rng, 112, 144);
    c.params[kSlotRadius] = uniform_int(rng, spec.radius_bins[0], spec.radius_bins[1]);
    out.push_back(c);
  }
}

}  // namespace

CadSequence random_cad_sequence(const GenSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const int count = uniform_int(rng, spec.min_extrusions, spec.max_extrusions);
  std::vector<CadCommand> content;
  const int zero = quantize_param(kSlotTheta, 0.0);
  const int quarter = quantize_param(kSlotTheta, std::numbers::pi / 2);
  for (int i = 0; i < count; ++i) {
    append_profile(content, spec, rng);
    CadCommand e = command(CadKind::kExtrude);
    const SketchPlane plane = spec.planes[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(spec.planes.size()) - 1))];
    e.params[kSlotTheta] = plane == SketchPlane::kXY ? zero : quarter;
    e.params[kSlotGamma] = plane == SketchPlane::kXZ ? quarter : zero;
    e.params[kSlotPx] = uniform_int(rng, spec.origin_bins[0], spec.origin_bins[1]);
    e.params[kSlotPy] = uniform_int(rng, spec.origin_bins[0], spec.origin_bins[1]);
    e.params[kSlotPs] = uniform_int(rng, spec.origin_bins[0], spec.origin_bins[1]);
    e.params[kSlotScale] = 128;
    e.params[kSlotExtent1] = uniform_int(rng, spec.extent_bins[0], spec.extent_bins[1]);
    e.params[kSlotExtent2] = 128;
    const auto mode = spec.vary_extent_mode ? static_cast<ExtentMode>(uniform_int(rng, 0, 2)) : ExtentMode::kOneSided;
    if (mode == ExtentMode::kTwoSided) e.params[kSlotExtent2] = uniform_int(rng, spec.extent_bins[0], spec.extent_bins[1]);
    e.params[kSlotExtentMode] = static_cast<int>(mode);
    const BooleanOp op = i == 0 ? BooleanOp::kNewBody : (uniform01(rng) < 0.5 ? BooleanOp::kJoin : BooleanOp::kCut);
    e.params[kSlotBoolean] = static_cast<int>(op);
    content.push_back(e);
  }
  return make_cad_sequence(content);
}

Wireframe wireframe_edges(const Solid& solid) {
  Wireframe w;
  for (const auto& body : solid.bodies) {
    const auto [lo, hi] = body.extent_interval();
    for (std::size_t l = 0; l < body.profile.loops.size(); ++l) {
      const auto& circle = body.profile.circles.size() > l ? body.profile.circles[l] : std::nullopt;
      if (circle) {
        const Vec3 u = body.scale * circle->radius * body.frame.x_axis;
        const Vec3 v = body.scale * circle->radius * body.frame.y_axis;
        const Circle3 base{body.to_world(circle->center, lo), u, v};
        w.circles.push_back(base);
        w.circles.push_back({body.to_world(circle->center, hi), u, v});
        w.cylinders.push_back({base, (hi - lo) * body.frame.normal});
        continue;
      }
      const auto& loop = body.profile.loops[l];
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % loop.size()];
        w.segments.push_back({body.to_world(a, lo), body.to_world(b, lo)});
        w.segments.push_back({body.to_world(a, hi), body.to_world(b, hi)});
        w.segments.push_back({body.to_world(a, lo), body.to_world(a, hi)});
      }
    }
  }
  return w;
}

Vec2 project_point(const Vec3& p, ViewLabel view) {
  switch (view) {
    case ViewLabel::kFront: return {p.x(), -p.z()};
    case ViewLabel::kTop: return {p.x(), -p.y()};
    case ViewLabel::kRight: return {p.y(), -p.z()};
    case ViewLabel::kIsometric: {
      const double c30 = std::sqrt(3.0) / 2.0;
      return {(p.x() - p.y()) * c30, (p.x() + p.y()) * 0.5 - p.z()};
    }
  }
  return {0.0, 0.0};
}

std::array<Segment, 4> conjugate_ellipse_to_beziers(const Vec2& c, const Vec2& u, const Vec2& v) {
  constexpr double kappa = 4.0 * (std::numbers::sqrt2 - 1.0) / 3.0;
  // Quarter arcs of the unit circle mapped through the affine frame (u, v).
  const std::array<Vec2, 5> axes = {u, v, -u, -v, u};
  std::array<Segment, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2& p = axes[i];
    const Vec2& q = axes[i + 1];
    out[i] = Segment::cubic(c + p, c + p + kappa * q, c + q + kappa * p, c + q);
  }
  return out;
}

std::array<Segment, 4> ellipse_to_beziers(const Vec2& center, double semi_a, double semi_b, double rotation) {
  if (!(semi_a > 0.0) || !(semi_b > 0.0)) throw ContractError("ellipse_to_beziers: semi-axes must be positive");
  const Vec2 ex(std::cos(rotation), std::sin(rotation));
  const Vec2 ey(-ex.y(), ex.x());
  return conjugate_ellipse_to_beziers(center, semi_a * ex, semi_b * ey);
}

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

class SegmentSink {
 public:
  explicit SegmentSink(double scale) : eps_(1e-9 * std::max(scale, 1e-12)) {}

  void add(const Segment& s) {
    if ((s.end - s.start).norm() <= eps_ &&
        (s.kind == SegmentKind::kLine || ((s.c1 - s.start).norm() <= eps_ && (s.c2 - s.start).norm() <= eps_))) {
      return;
    }
    auto key_of = [this](const Segment& t) {
      std::array<long long, 9> k{};
      k[0] = static_cast<long long>(t.kind);
      const std::array<Point2, 4> pts = {t.start, t.c1, t.c2, t.end};
      for (std::size_t i = 0; i < 4; ++i) {
        const bool used = t.kind == SegmentKind::kCubic || i == 0 || i == 3;
        k[1 + 2 * i] = used ? std::llround(pts[i].x() / eps_) : 0;
        k[2 + 2 * i] = used ? std::llround(pts[i].y() / eps_) : 0;
      }
      return k;
    };
    const auto key = std::min(key_of(s), key_of(s.reversed()));
    if (seen_.insert(key).second) out.push_back(s);
  }

  std::vector<Segment> out;

 private:
  double eps_;
  std::set<std::array<long long, 9>> seen_;
};

double wire_scale(const Wireframe& wire) {
  double s = 0.0;
  for (const auto& e : wire.segments) s = std::max({s, e.a.cwiseAbs().maxCoeff(), e.b.cwiseAbs().maxCoeff()});
  for (const auto& c : wire.circles) s = std::max(s, c.center.cwiseAbs().maxCoeff() + c.u.norm() + c.v.norm());
  return s;
}

}  // namespace

std::vector<Segment> project_wireframe(const Wireframe& wire, ViewLabel view) {
  SegmentSink sink(wire_scale(wire));
  auto proj = [view](const Vec3& p) -> Vec2 { return project_point(p, view); };
  auto dir = [view](const Vec3& d) -> Vec2 { return project_point(d, view) - project_point(Vec3::Zero(), view); };
  for (const auto& e : wire.segments) sink.add(Segment::line(proj(e.a), proj(e.b)));
  for (const auto& c : wire.circles) {
    const Vec2 center = proj(c.center);
    const Vec2 u = dir(c.u);
    const Vec2 v = dir(c.v);
    if (std::abs(cross2(u, v)) <= 1e-9 * (u.squaredNorm() + v.squaredNorm())) {
      // Seen edge-on: the circle covers a single line.
      const Vec2 e = (u.norm() >= v.norm() ? u : v).normalized();
      const double half = std::hypot(u.dot(e), v.dot(e));
      sink.add(Segment::line(center - half * e, center + half * e));
      continue;
    }
    for (const auto& s : conjugate_ellipse_to_beziers(center, u, v)) sink.add(s);
  }
  for (const auto& cyl : wire.cylinders) {
    const Vec2 a = dir(cyl.axis);
    if (a.norm() <= 1e-9 * std::max(1.0, cyl.axis.norm())) continue;
    const Vec2 center = proj(cyl.base.center);
    const Vec2 u = dir(cyl.base.u);
    const Vec2 v = dir(cyl.base.v);
    // Contour generators: points where the rim tangent is parallel to the axis.
    const double t0 = std::atan2(cross2(v, a), cross2(u, a));
    for (const double t : {t0, t0 + std::numbers::pi}) {
      const Vec2 p = center + std::cos(t) * u + std::sin(t) * v;
      sink.add(Segment::line(p, p + a));
    }
  }
  return std::move(sink.out);
}

namespace {

ViewBox padded_box(const Vec2& lo, const Vec2& hi) {
  const Vec2 size = hi - lo;
  const double margin = 0.05 * std::max(size.maxCoeff(), 1e-9);
  return ViewBox{lo.x() - margin, lo.y() - margin, size.x() + 2 * margin, size.y() + 2 * margin};
}

}  // namespace

std::map<ViewLabel, DrawingSequence> render_views(const CadSequence& seq, std::uint64_t seed) {
  const auto shape = reconstruct(seq);
  if (!shape.ok()) throw ContractError("render_views: sequence is invalid: " + shape.invalid->detail);
  const Wireframe wire = wireframe_edges(*shape.solid);
  const auto [lo3, hi3] = shape.solid->bounds();
  const double side = (hi3 - lo3).maxCoeff();
  const Vec3 mid = 0.5 * (lo3 + hi3);

  std::map<ViewLabel, DrawingSequence> views;
  for (const ViewLabel view : kAllViews) {
    auto segments = project_wireframe(wire, view);
    ViewBox box;
    if (view == ViewLabel::kIsometric) {
      Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
      Vec2 hi = -lo;
      for (const auto& s : segments) {
        std::vector<Point2> pts = {s.start, s.end};
        if (s.kind == SegmentKind::kCubic) pts.insert(pts.end(), {s.c1, s.c2});
        for (const Point2& p : pts) {
          lo = lo.cwiseMin(p);
          hi = hi.cwiseMax(p);
        }
      }
      box = padded_box(lo, hi);
    } else {
      // Orthographic views share one square so their scales agree.
      const Vec2 c = project_point(mid, view);
      const Vec2 half = Vec2::Constant(side / 2);
      box = padded_box(c - half, c + half);
    }
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(view)));
    for (std::size_t i = segments.size(); i > 1; --i) {
      std::swap(segments[i - 1], segments[static_cast<std::size_t>(rng() % i)]);
    }
    views.emplace(view, drawing_from_segments(segments, box, view));
  }
  return views;
}

Record generate_record(const GenSpec& spec, std::uint64_t seed, const std::string& id) {
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    const std::uint64_t sub = mix_seed(seed, attempt);
    Record r;
    r.id = id;
    r.cad = random_cad_sequence(spec, sub);
    const auto shape = reconstruct(r.cad);
    if (!shape.ok()) continue;
    try {
      sample_shape(*shape.solid, 64, sub);
      r.views = render_views(r.cad, sub);
    } catch (const SamplingError&) {
      continue;
    } catch (const LengthExceededError&) {
      continue;
    }
    return r;
  }
  throw Error("generate_record: no usable sample for seed " + std::to_string(seed));
}

std::vector<Record> generate_dataset(const GenSpec& spec, std::size_t count, std::uint64_t seed) {
  std::vector<Record> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "s%06zu", i);
    out.push_back(generate_record(spec, mix_seed(seed, i), id));
  }
  return out;
}

}  // namespace vdcad
