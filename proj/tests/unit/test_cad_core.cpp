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
#include <doctest.h>

#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "vdcad/cad_core.hpp"
#include "vdcad/errors.hpp"

namespace vdcad {
namespace {

using testing::circle;
using testing::cmd;
using testing::extrude;
using testing::line_to;
using testing::square_loop;

bool has_violation(const CadSequence& seq, Violation kind) {
  for (const auto& v : validate_cad_sequence(seq)) {
    if (v.kind == kind) return true;
  }
  return false;
}

TEST_CASE("usage masks match the command table") {
  auto used = [](CadKind k) {
    int n = 0;
    for (bool b : usage_mask(k)) n += b;
    return n;
  };
  CHECK(used(CadKind::kSol) == 0);
  CHECK(used(CadKind::kEos) == 0);
  CHECK(used(CadKind::kLine) == 2);
  CHECK(used(CadKind::kArc) == 4);
  CHECK(used(CadKind::kCircle) == 3);
  CHECK(used(CadKind::kExtrude) == 10);
  CHECK(usage_mask(CadKind::kCircle)[kSlotRadius]);
  CHECK_FALSE(usage_mask(CadKind::kLine)[kSlotRadius]);
}

TEST_CASE("continuous slots dequantize linearly") {
  CHECK(dequantize_param(kSlotX, 0) == doctest::Approx(-1.0));
  CHECK(dequantize_param(kSlotX, 255) == doctest::Approx(1.0));
  CHECK(dequantize_param(kSlotRadius, 255) == doctest::Approx(1.0));
  CHECK(dequantize_param(kSlotScale, 64) == doctest::Approx(128.0 / 255.0));
  CHECK(dequantize_param(kSlotExtent1, 192) == doctest::Approx(129.0 / 255.0));
  CHECK(quantize_param(kSlotX, -1.0) == 0);
  CHECK(quantize_param(kSlotX, 1.0) == 255);
  CHECK(quantize_param(kSlotX, 5.0) == 255);
  CHECK_THROWS_AS(dequantize_param(kSlotX, 256), RangeError);
  CHECK_THROWS_AS(param_range(kCadParamCount), RangeError);
}

TEST_CASE("angles quantize periodically") {
  constexpr double pi = std::numbers::pi;
  CHECK(quantize_param(kSlotTheta, 0.0) == 128);
  CHECK(quantize_param(kSlotTheta, pi / 2) == 192);
  CHECK(quantize_param(kSlotTheta, -pi) == 0);
  CHECK(quantize_param(kSlotTheta, pi) == 0);  // wraps onto -pi
  CHECK(dequantize_param(kSlotGamma, 192) == doctest::Approx(pi / 2));
  for (int b = 0; b < kNumBins; ++b) {
    CHECK(quantize_param(kSlotAlpha, dequantize_param(kSlotAlpha, b)) == b);
  }
}

TEST_CASE("enumerations reject values outside their range") {
  CHECK(param_range(kSlotBoolean).cardinality == 4);
  CHECK(param_range(kSlotExtentMode).cardinality == 3);
  CHECK(param_range(kSlotArcFlag).cardinality == 2);
  CHECK(quantize_param(kSlotBoolean, 2.0) == 2);
  CHECK_THROWS_AS(quantize_param(kSlotExtentMode, 3.0), RangeError);
}

TEST_CASE("continuous quantization round trips every bin") {
  for (std::size_t s : {kSlotX, kSlotRadius, kSlotScale, kSlotExtent2}) {
    for (int b = 0; b < kNumBins; ++b) CHECK(quantize_param(s, dequantize_param(s, b)) == b);
  }
}

TEST_CASE("padding and length limits") {
  auto seq = testing::square_extrude();
  CHECK(seq.size() == kDefaultCadLength);
  CHECK(seq.content().size() == 6);
  CHECK(seq.commands.back().kind == CadKind::kEos);
  CHECK(seq.padded(7).size() == 7);
  CHECK_THROWS_AS(seq.padded(6), LengthExceededError);
}

TEST_CASE("a closed square extruded once is valid") {
  CHECK(validate_cad_sequence(testing::square_extrude()).empty());
  CHECK(is_valid(testing::cube_sequence()));
}

TEST_CASE("structural violations") {
  SUBCASE("empty") { CHECK(has_violation(make_cad_sequence({}), Violation::kEmpty)); }
  SUBCASE("extrude with no loop") {
    std::vector<CadCommand> c{extrude(200)};
    CHECK(has_violation(make_cad_sequence(c), Violation::kExtrudeWithoutLoop));
  }
  SUBCASE("curve before any loop") {
    std::vector<CadCommand> c{line_to(10, 10), extrude(200)};
    CHECK(has_violation(make_cad_sequence(c), Violation::kCurveOutsideLoop));
  }
  SUBCASE("empty loop") {
    auto c = square_loop(0, 100);
    c.insert(c.begin(), cmd(CadKind::kSol));
    c.push_back(extrude(200));
    CHECK(has_violation(make_cad_sequence(c), Violation::kEmptyLoop));
  }
  SUBCASE("two lines enclose nothing") {
    std::vector<CadCommand> c{cmd(CadKind::kSol), line_to(100, 0), line_to(0, 0), extrude(200)};
    CHECK(has_violation(make_cad_sequence(c), Violation::kOpenLoop));
  }
  SUBCASE("collapsed curve") {
    auto c = square_loop(0, 100);
    c.insert(c.begin() + 2, line_to(101, 0));  // one bin from its predecessor
    c.push_back(extrude(200));
    CHECK(has_violation(make_cad_sequence(c), Violation::kOpenLoop));
  }
  SUBCASE("circle sharing a loop") {
    auto c = square_loop(0, 100);
    c.push_back(circle(50, 50, 20));
    c.push_back(extrude(200));
    CHECK(has_violation(make_cad_sequence(c), Violation::kOpenLoop));
  }
  SUBCASE("sketch without extrude") {
    auto c = square_loop(0, 100);
    c.push_back(extrude(200));
    auto tail = square_loop(10, 50);
    c.insert(c.end(), tail.begin(), tail.end());
    CHECK(has_violation(make_cad_sequence(c), Violation::kDanglingSketch));
  }
  SUBCASE("first extrude must create a body") {
    auto c = square_loop(0, 100);
    c.push_back(extrude(200, BooleanOp::kJoin));
    CHECK(has_violation(make_cad_sequence(c), Violation::kFirstExtrudeNotNewBody));
  }
  SUBCASE("used slot left unused") {
    auto c = square_loop(0, 100);
    c[1].params[kSlotY] = kUnusedBin;
    c.push_back(extrude(200));
    CHECK(has_violation(make_cad_sequence(c), Violation::kParameterOutOfRange));
  }
  SUBCASE("unused slot carrying a value") {
    auto c = square_loop(0, 100);
    c[1].params[kSlotRadius] = 3;
    c.push_back(extrude(200));
    CHECK(has_violation(make_cad_sequence(c), Violation::kParameterOutOfRange));
  }
  SUBCASE("enumeration bin beyond its cardinality") {
    auto c = square_loop(0, 100);
    c.push_back(extrude(200));
    c.back().params[kSlotExtentMode] = 7;
    CHECK(has_violation(make_cad_sequence(c), Violation::kParameterOutOfRange));
  }
  SUBCASE("zero extent") {
    auto c = square_loop(0, 100);
    c.push_back(extrude(128));  // bin 128 is 1/255, small but not zero
    CHECK(is_valid(make_cad_sequence(c)));
    // Two-sided with e2 = -e1 covers an empty interval.
    c.back() = extrude(200, BooleanOp::kNewBody, ExtentMode::kTwoSided, 55);
    CHECK(has_violation(make_cad_sequence(c), Violation::kDegenerateGeometry));
  }
  SUBCASE("zero radius circle") {
    std::vector<CadCommand> c{cmd(CadKind::kSol), circle(128, 128, 0), extrude(200)};
    CHECK(has_violation(make_cad_sequence(c), Violation::kDegenerateGeometry));
  }
  SUBCASE("zero scale") {
    auto c = square_loop(0, 100);
    c.push_back(extrude(200));
    c.back().params[kSlotScale] = 0;
    CHECK(has_violation(make_cad_sequence(c), Violation::kDegenerateGeometry));
  }
}

TEST_CASE("a lone circle loop is closed") {
  std::vector<CadCommand> c{cmd(CadKind::kSol), circle(128, 128, 60), extrude(220)};
  CHECK(is_valid(make_cad_sequence(c)));
}

TEST_CASE("merge keeps only slots the predicted kind uses") {
  std::vector<CadKind> kinds{CadKind::kSol, CadKind::kLine, CadKind::kEos, CadKind::kLine};
  std::vector<CadParams> args(4);
  for (auto& a : args) a.fill(7);
  auto seq = merge_outputs(kinds, args);
  REQUIRE(seq.size() == 4);
  CHECK(seq.commands[0].params == CadCommand::unused());
  CHECK(seq.commands[1].params[kSlotX] == 7);
  CHECK(seq.commands[1].params[kSlotY] == 7);
  CHECK(seq.commands[1].params[kSlotRadius] == kUnusedBin);
  // Everything from the first EOS on is padding.
  CHECK(seq.commands[3].kind == CadKind::kEos);
  CHECK(seq.commands[3].params == CadCommand::unused());
  CHECK(seq.content().size() == 2);

  std::vector<CadKind> k2;
  std::vector<CadParams> a2;
  for (const auto& c : seq.commands) {
    k2.push_back(c.kind);
    a2.push_back(c.params);
  }
  CHECK(merge_outputs(k2, a2) == seq);
  CHECK_THROWS_AS(merge_outputs(kinds, std::span<const CadParams>(args).first(2)), ContractError);
}

TEST_CASE("equality within tolerance compares used slots only") {
  auto a = testing::square_extrude(0, 100);
  auto b = a;
  b.commands[1].params[kSlotX] += 2;
  CHECK(sequence_equal_within(a, b, 3));
  b.commands[1].params[kSlotX] += 1;
  CHECK_FALSE(sequence_equal_within(a, b, 3));
  CHECK(sequence_equal_within(a, a, 1));
  CHECK_FALSE(sequence_equal_within(a, a, 0));
  CHECK_THROWS_AS(sequence_equal_within(a, a, -1), ContractError);
  auto c = a;
  c.commands[1].kind = CadKind::kArc;
  CHECK_FALSE(sequence_equal_within(a, c, 3));
}

TEST_CASE("text form round trips") {
  const auto seq = testing::cube_sequence();
  std::stringstream ss;
  write_cad_text(ss, seq);
  CHECK(read_cad_text(ss) == seq);
  std::istringstream bad("Line 1 2 3\n");
  CHECK_THROWS_AS(read_cad_text(bad), ParseError);
  std::istringstream unknown("Spline 1\n");
  CHECK_THROWS(read_cad_text(unknown));
}

}  // namespace
}  // namespace vdcad
