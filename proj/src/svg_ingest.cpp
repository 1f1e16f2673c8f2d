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
#include "vdcad/svg_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "vdcad/errors.hpp"

namespace vdcad {

Segment Segment::line(const Point2& a, const Point2& b) {
  return {SegmentKind::kLine, a, a, b, b};
}

Segment Segment::cubic(const Point2& a, const Point2& c1, const Point2& c2, const Point2& b) {
  return {SegmentKind::kCubic, a, c1, c2, b};
}

Segment Segment::reversed() const {
  if (kind == SegmentKind::kLine) return line(end, start);
  return cubic(end, c2, c1, start);
}

bool Segment::degenerate() const {
  if (kind == SegmentKind::kLine) return start == end;
  return start == end && c1 == start && c2 == start;
}

Point2 Segment::eval(double t) const {
  if (kind == SegmentKind::kLine) return start + t * (end - start);
  const double u = 1.0 - t;
  return u * u * u * start + 3 * u * u * t * c1 + 3 * u * t * t * c2 + t * t * t * end;
}

// ---------------------------------------------------------------------------
// Path data

namespace {

class PathLexer {
 public:
  explicit PathLexer(std::string_view s) : s_(s) {}

  void skip_separators() {
    while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == ',')) {
      ++pos_;
    }
  }
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

  bool at_number() {
    skip_separators();
    if (done()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
  }

  double number() {
    skip_separators();
    const std::size_t begin = pos_;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || !std::isfinite(value)) throw ParseError("malformed number", begin);
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return value;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

bool is_unsupported_command(char c) {
  switch (c) {
    case 'A': case 'a': case 'Q': case 'q': case 'S': case 's': case 'T': case 't': return true;
    default: return false;
  }
}

bool is_supported_command(char c) {
  return std::string_view("MmLlHhVvCcZz").find(c) != std::string_view::npos;
}

}  // namespace

std::vector<Segment> parse_path_data(std::string_view d) {
  std::vector<Segment> out;
  PathLexer lex(d);
  Point2 cur = Point2::Zero();
  Point2 subpath_start = Point2::Zero();
  bool have_point = false;

  auto point = [&](bool relative) {
    const double x = lex.number();
    const double y = lex.number();
    return relative ? Point2(cur.x() + x, cur.y() + y) : Point2(x, y);
  };

  while (true) {
    lex.skip_separators();
    if (lex.done()) break;
    const std::size_t at = lex.pos();
    char cmd = lex.peek();
    if (is_unsupported_command(cmd)) throw UnsupportedCommandError(cmd);
    if (!is_supported_command(cmd)) throw ParseError(std::string("unexpected character '") + cmd + "'", at);
    lex.advance();
    if (cmd != 'M' && cmd != 'm' && !have_point) throw ParseError("path must start with moveto", at);
    if (cmd == 'Z' || cmd == 'z') {
      if (cur != subpath_start) out.push_back(Segment::line(cur, subpath_start));
      cur = subpath_start;
      continue;
    }
    do {
      const bool rel = std::islower(static_cast<unsigned char>(cmd));
      switch (cmd) {
        case 'M':
        case 'm':
          cur = point(rel);
          subpath_start = cur;
          have_point = true;
          // Further coordinate pairs are implicit linetos.
          cmd = rel ? 'l' : 'L';
          break;
        case 'L':
        case 'l': {
          const Point2 p = point(rel);
          out.push_back(Segment::line(cur, p));
          cur = p;
          break;
        }
        case 'H':
        case 'h': {
          const double x = lex.number();
          const Point2 p(rel ? cur.x() + x : x, cur.y());
          out.push_back(Segment::line(cur, p));
          cur = p;
          break;
        }
        case 'V':
        case 'v': {
          const double y = lex.number();
          const Point2 p(cur.x(), rel ? cur.y() + y : y);
          out.push_back(Segment::line(cur, p));
          cur = p;
          break;
        }
        case 'C':
        case 'c': {
          const Point2 c1 = point(rel);
          const Point2 c2 = point(rel);
          const Point2 p = point(rel);
          out.push_back(Segment::cubic(cur, c1, c2, p));
          cur = p;
          break;
        }
      }
    } while (lex.at_number());
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG document

namespace {

struct Tag {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '_' || c == '-' || c == '.';
}

// Parses the tag starting at text[pos] == '<'. Returns the index after '>'.
std::size_t read_tag(std::string_view text, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  if (i < text.size() && text[i] == '/') ++i;
  const std::size_t name_begin = i;
  while (i < text.size() && is_name_char(text[i])) ++i;
  tag.name = std::string(text.substr(name_begin, i - name_begin));
  tag.attributes.clear();
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    if (text[i] == '>') return i + 1;
    if (text[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t attr_begin = i;
    while (i < text.size() && is_name_char(text[i])) ++i;
    if (i == attr_begin) throw ParseError("malformed attribute", i);
    std::string name(text.substr(attr_begin, i - attr_begin));
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size() || text[i] != '=') {
      tag.attributes.emplace_back(std::move(name), "");
      continue;
    }
    ++i;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size() || (text[i] != '"' && text[i] != '\'')) throw ParseError("unquoted attribute", i);
    const char quote = text[i++];
    const std::size_t close = text.find(quote, i);
    if (close == std::string_view::npos) throw ParseError("unterminated attribute", i);
    tag.attributes.emplace_back(std::move(name), std::string(text.substr(i, close - i)));
    i = close + 1;
  }
  throw ParseError("unterminated tag", pos);
}

std::optional<std::string> attribute(const Tag& tag, std::string_view name) {
  for (const auto& [k, v] : tag.attributes) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::optional<double> leading_number(const std::string& s) {
  PathLexer lex(s);
  if (!lex.at_number()) return std::nullopt;
  return lex.number();
}

}  // namespace

SvgDocument parse_svg_document(std::string_view text) {
  SvgDocument doc;
  bool seen_root = false;
  std::size_t i = 0;
  while ((i = text.find('<', i)) != std::string_view::npos) {
    if (text.substr(i, 4) == "<!--") {
      const std::size_t end = text.find("-->", i + 4);
      if (end == std::string_view::npos) throw ParseError("unterminated comment", i);
      i = end + 3;
      continue;
    }
    if (text.substr(i, 2) == "<?" || text.substr(i, 2) == "<!") {
      const std::size_t end = text.find('>', i);
      if (end == std::string_view::npos) throw ParseError("unterminated declaration", i);
      i = end + 1;
      continue;
    }
    const bool closing = i + 1 < text.size() && text[i + 1] == '/';
    Tag tag;
    i = read_tag(text, i, tag);
    if (closing) continue;
    if (tag.name == "svg" && !seen_root) {
      seen_root = true;
      if (auto vb = attribute(tag, "viewBox")) {
        PathLexer lex(*vb);
        ViewBox box;
        box.min_x = lex.number();
        box.min_y = lex.number();
        box.width = lex.number();
        box.height = lex.number();
        doc.viewbox = box;
      } else {
        auto w = attribute(tag, "width");
        auto h = attribute(tag, "height");
        if (w && h) {
          auto wv = leading_number(*w);
          auto hv = leading_number(*h);
          if (wv && hv) doc.viewbox = ViewBox{0.0, 0.0, *wv, *hv};
        }
      }
    } else if (tag.name == "path") {
      if (auto d = attribute(tag, "d")) doc.path_data.push_back(*d);
    }
  }
  if (!seen_root) throw ParseError("no <svg> root element", 0);
  return doc;
}

// ---------------------------------------------------------------------------
// Normalization

std::vector<Segment> normalize_viewbox(std::span<const Segment> segments, const ViewBox& box) {
  if (!(box.width > 0.0) || !(box.height > 0.0)) {
    throw GeometryError("degenerate viewbox");
  }
  const double scale = kViewboxSize / std::max(box.width, box.height);
  const double off_x = (kViewboxSize - box.width * scale) / 2.0;
  const double off_y = (kViewboxSize - box.height * scale) / 2.0;
  auto map = [&](const Point2& p) {
    Point2 q((p.x() - box.min_x) * scale + off_x, (p.y() - box.min_y) * scale + off_y);
    // Absorb rounding at the boundary.
    for (int k = 0; k < 2; ++k) {
      if (q[k] < 0.0 && q[k] > -1e-9) q[k] = 0.0;
      if (q[k] > kViewboxSize && q[k] < kViewboxSize + 1e-9) q[k] = kViewboxSize;
    }
    return q;
  };
  std::vector<Segment> out;
  out.reserve(segments.size());
  for (const auto& s : segments) {
    out.push_back({s.kind, map(s.start), map(s.c1), map(s.c2), map(s.end)});
  }
  return out;
}

std::vector<Segment> snap_to_bins(std::span<const Segment> segments) {
  auto snap = [](const Point2& p) {
    return Point2(dequantize_coord(quantize_coord(p.x())), dequantize_coord(quantize_coord(p.y())));
  };
  std::vector<Segment> out;
  out.reserve(segments.size());
  for (const auto& s : segments) {
    Segment t = s.kind == SegmentKind::kLine
                    ? Segment::line(snap(s.start), snap(s.end))
                    : Segment::cubic(snap(s.start), snap(s.c1), snap(s.c2), snap(s.end));
    if (!t.degenerate()) out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contours

namespace {

// Canonical point order: distance to the origin, then y, then x.
bool point_less(const Point2& a, const Point2& b) {
  return std::make_tuple(a.squaredNorm(), a.y(), a.x()) < std::make_tuple(b.squaredNorm(), b.y(), b.x());
}

auto segment_key(const Segment& s) {
  return std::make_tuple(static_cast<int>(s.kind), s.start.x(), s.start.y(), s.c1.x(), s.c1.y(),
                         s.c2.x(), s.c2.y(), s.end.x(), s.end.y());
}

class EndpointGraph {
 public:
  EndpointGraph(std::span<const Segment> segments, double tol) {
    const std::size_t n = segments.size();
    std::vector<Point2> pts;
    pts.reserve(2 * n);
    for (const auto& s : segments) {
      pts.push_back(s.start);
      pts.push_back(s.end);
    }
    // Union of all endpoints within tolerance; the partition is order independent.
    std::vector<std::size_t> parent(pts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        if ((pts[i] - pts[j]).norm() <= tol) parent[find(i)] = find(j);
      }
    }
    std::vector<std::size_t> rep(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) rep[i] = find(i);
    // Representative point of a cluster: its canonical minimum.
    std::vector<std::size_t> best(pts.size(), SIZE_MAX);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto& b = best[rep[i]];
      if (b == SIZE_MAX || point_less(pts[i], pts[b])) b = i;
    }
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (rep[i] == i) roots.push_back(i);
    }
    std::sort(roots.begin(), roots.end(),
              [&](std::size_t a, std::size_t b) { return point_less(pts[best[a]], pts[best[b]]); });
    std::vector<int> vertex_of_root(pts.size(), -1);
    for (std::size_t v = 0; v < roots.size(); ++v) {
      vertex_of_root[roots[v]] = static_cast<int>(v);
      vertex_.push_back(pts[best[roots[v]]]);
    }
    incident_.resize(vertex_.size());
    for (std::size_t e = 0; e < n; ++e) {
      const int a = vertex_of_root[rep[2 * e]];
      const int b = vertex_of_root[rep[2 * e + 1]];
      Segment seg = segments[e];
      seg.start = vertex_[a];
      seg.end = vertex_[b];
      edges_.push_back({a, b, seg, false});
      incident_[a].push_back(static_cast<int>(e));
      if (b != a) incident_[b].push_back(static_cast<int>(e));
    }
    remaining_.assign(vertex_.size(), 0);
    for (const auto& e : edges_) {
      ++remaining_[e.a];
      ++remaining_[e.b];
    }
  }

  std::vector<Contour> decompose() {
    std::vector<Contour> out;
    std::size_t unused = edges_.size();
    while (unused > 0) {
      const int start = pick_start();
      Contour contour;
      int cur = start;
      while (true) {
        int best_edge = -1;
        Segment best_seg;
        for (int e : incident_[cur]) {
          if (edges_[e].used) continue;
          const Segment seg = oriented(edges_[e], cur);
          if (best_edge < 0 || edge_less(seg, best_seg)) {
            best_edge = e;
            best_seg = seg;
          }
        }
        if (best_edge < 0) break;
        Edge& e = edges_[best_edge];
        e.used = true;
        --unused;
        --remaining_[e.a];
        --remaining_[e.b];
        contour.segments.push_back(best_seg);
        cur = e.a == cur ? e.b : e.a;
      }
      contour.closed = cur == start;
      out.push_back(std::move(contour));
    }
    return out;
  }

 private:
  struct Edge {
    int a;
    int b;
    Segment seg;  // oriented a -> b
    bool used;
  };

  // Lowest vertex with odd remaining degree, else lowest vertex with any edge.
  int pick_start() const {
    for (std::size_t v = 0; v < vertex_.size(); ++v) {
      if (remaining_[v] % 2 == 1) return static_cast<int>(v);
    }
    for (std::size_t v = 0; v < vertex_.size(); ++v) {
      if (remaining_[v] > 0) return static_cast<int>(v);
    }
    return -1;
  }

  bool edge_less(const Segment& a, const Segment& b) const {
    const int va = vertex_index(a.end);
    const int vb = vertex_index(b.end);
    if (va != vb) return va < vb;
    return segment_key(a) < segment_key(b);
  }

  int vertex_index(const Point2& p) const {
    for (std::size_t v = 0; v < vertex_.size(); ++v) {
      if (vertex_[v] == p) return static_cast<int>(v);
    }
    return -1;
  }

  static Segment oriented(const Edge& e, int from) {
    if (e.a == e.b) {
      const Segment r = e.seg.reversed();
      return segment_key(r) < segment_key(e.seg) ? r : e.seg;
    }
    return e.a == from ? e.seg : e.seg.reversed();
  }

  std::vector<Point2> vertex_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<int> remaining_;
};

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

Contour reversed(const Contour& c) {
  Contour r;
  r.closed = c.closed;
  for (auto it = c.segments.rbegin(); it != c.segments.rend(); ++it) r.segments.push_back(it->reversed());
  return r;
}

// Vertex of the contour nearest the origin (canonical order).
std::size_t nearest_vertex(const Contour& c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.segments.size(); ++i) {
    if (point_less(c.segments[i].start, c.segments[best].start)) best = i;
  }
  return best;
}

Point2 nearest_point(const Contour& c) {
  Point2 best = c.segments.front().start;
  for (const auto& s : c.segments) {
    if (point_less(s.start, best)) best = s.start;
    if (point_less(s.end, best)) best = s.end;
  }
  return best;
}

bool contour_less(const Contour& a, const Contour& b) {
  const Point2 pa = nearest_point(a);
  const Point2 pb = nearest_point(b);
  if (point_less(pa, pb)) return true;
  if (point_less(pb, pa)) return false;
  const std::size_t n = std::min(a.segments.size(), b.segments.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ka = segment_key(a.segments[i]);
    const auto kb = segment_key(b.segments[i]);
    if (ka != kb) return ka < kb;
  }
  if (a.segments.size() != b.segments.size()) return a.segments.size() < b.segments.size();
  return a.closed < b.closed;
}

}  // namespace

std::vector<Contour> build_contours(std::span<const Segment> segments, double join_tolerance) {
  if (!(join_tolerance > 0.0)) throw ContractError("build_contours: tolerance must be positive");
  for (const auto& s : segments) {
    if (!s.start.allFinite() || !s.end.allFinite() || !s.c1.allFinite() || !s.c2.allFinite()) {
      throw GeometryError("non-finite segment coordinate");
    }
  }
  if (segments.empty()) return {};
  return EndpointGraph(segments, join_tolerance).decompose();
}

double signed_area(const Contour& contour) {
  double twice = 0.0;
  for (const auto& s : contour.segments) {
    if (s.kind == SegmentKind::kLine) {
      twice += cross(s.start, s.end);
    } else {
      // Green's theorem over the Bezier: (1/20)(6 p0p1 + 3 p0p2 + p0p3 + 3 p1p2 + 3 p1p3 + 6 p2p3).
      twice += (6 * cross(s.start, s.c1) + 3 * cross(s.start, s.c2) + cross(s.start, s.end) +
                3 * cross(s.c1, s.c2) + 3 * cross(s.c1, s.end) + 6 * cross(s.c2, s.end)) /
               10.0;
    }
  }
  return twice / 2.0;
}

std::vector<Contour> reorder_contours(std::vector<Contour> contours) {
  std::erase_if(contours, [](const Contour& c) { return c.segments.empty(); });
  for (auto& c : contours) {
    if (!c.closed) continue;
    if (signed_area(c) < 0.0) c = reversed(c);
    std::rotate(c.segments.begin(), c.segments.begin() + static_cast<std::ptrdiff_t>(nearest_vertex(c)),
                c.segments.end());
  }
  std::stable_sort(contours.begin(), contours.end(), contour_less);
  return contours;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

SvgToken token_for(const Segment& s) {
  std::array<double, kSvgParamCount> raw = {s.start.x(), s.start.y(), s.c1.x(), s.c1.y(),
                                            s.c2.x(),    s.c2.y(),    s.end.x(), s.end.y()};
  return make_token(s.kind == SegmentKind::kLine ? SvgKind::kLineTo : SvgKind::kCubic, raw);
}

ViewBox content_bounds(std::span<const Segment> segments) {
  if (segments.empty()) return ViewBox{};
  Eigen::Vector2d lo = segments.front().start, hi = lo;
  for (const auto& s : segments) {
    for (const Point2* p : {&s.start, &s.end, &s.c1, &s.c2}) {
      lo = lo.cwiseMin(*p);
      hi = hi.cwiseMax(*p);
    }
  }
  const Eigen::Vector2d size = (hi - lo).cwiseMax(1e-9);
  return ViewBox{lo.x(), lo.y(), size.x(), size.y()};
}

}  // namespace

DrawingSequence drawing_from_segments(std::span<const Segment> segments, const ViewBox& box,
                                      ViewLabel view) {
  const auto normalized = normalize_viewbox(segments, box);
  const auto snapped = snap_to_bins(normalized);
  if (snapped.size() + 1 > kDrawingLength) throw LengthExceededError(snapped.size(), kDrawingLength - 1);
  const auto contours = reorder_contours(build_contours(snapped));
  std::vector<SvgToken> tokens;
  for (const auto& c : contours) {
    for (const auto& s : c.segments) tokens.push_back(token_for(s));
  }
  return pad_drawing(tokens, view);
}

DrawingSequence drawing_from_svg(std::string_view svg_text, ViewLabel view) {
  const SvgDocument doc = parse_svg_document(svg_text);
  std::vector<Segment> segments;
  for (const auto& d : doc.path_data) {
    auto part = parse_path_data(d);
    segments.insert(segments.end(), part.begin(), part.end());
  }
  const ViewBox box = doc.viewbox ? *doc.viewbox : content_bounds(segments);
  return drawing_from_segments(segments, box, view);
}

DrawingSequence drawing_from_svg_file(const std::string& path, ViewLabel view) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open SVG file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return drawing_from_svg(ss.str(), view);
}

std::vector<Segment> segments_from_drawing(const DrawingSequence& drawing) {
  std::vector<Segment> out;
  for (const auto& t : drawing.content()) {
    auto pt = [&](std::size_t i) {
      return Point2(dequantize_coord(t.params[i]), dequantize_coord(t.params[i + 1]));
    };
    if (t.kind == SvgKind::kLineTo) {
      out.push_back(Segment::line(pt(0), pt(6)));
    } else if (t.kind == SvgKind::kCubic) {
      out.push_back(Segment::cubic(pt(0), pt(2), pt(4), pt(6)));
    }
  }
  return out;
}

std::string drawing_to_svg(const DrawingSequence& drawing) {
  std::ostringstream out;
  out.precision(17);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 200 200\" "
         "width=\"200\" height=\"200\">\n";
  const auto segments = segments_from_drawing(drawing);
  std::size_t i = 0;
  while (i < segments.size()) {
    out << "  <path fill=\"none\" stroke=\"black\" d=\"M " << segments[i].start.x() << ' '
        << segments[i].start.y();
    do {
      const auto& s = segments[i];
      if (s.kind == SegmentKind::kLine) {
        out << " L " << s.end.x() << ' ' << s.end.y();
      } else {
        out << " C " << s.c1.x() << ' ' << s.c1.y() << ' ' << s.c2.x() << ' ' << s.c2.y() << ' '
            << s.end.x() << ' ' << s.end.y();
      }
      ++i;
    } while (i < segments.size() && segments[i].start == segments[i - 1].end);
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace vdcad
