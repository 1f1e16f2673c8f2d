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
#include "vdcad/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "vdcad/errors.hpp"

namespace vdcad {

using nlohmann::json;

namespace {

json tokens_to_json(const DrawingSequence& seq) {
  json arr = json::array();
  for (const auto& t : seq.content()) {
    arr.push_back({{"kind", to_string(t.kind)}, {"params", t.params}});
  }
  arr.push_back({{"kind", "EOS"}, {"params", SvgToken::unused_params()}});
  return arr;
}

json cad_to_json(const CadSequence& seq) {
  json arr = json::array();
  for (const auto& c : seq.content()) {
    arr.push_back({{"kind", to_string(c.kind)}, {"params", c.params}});
  }
  arr.push_back({{"kind", "EOS"}, {"params", CadCommand::unused()}});
  return arr;
}

template <std::size_t N>
std::array<int, N> read_params(const json& j, std::size_t line_no) {
  if (!j.is_array() || j.size() != N) {
    throw ParseError("expected " + std::to_string(N) + " parameters", line_no);
  }
  std::array<int, N> p{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number_integer()) throw ParseError("non-integer parameter", line_no);
    p[i] = j[i].get<int>();
    if (p[i] < 0 || p[i] > kUnusedBin) throw ParseError("parameter out of range", line_no);
  }
  return p;
}

DrawingSequence drawing_from_json(const json& arr, ViewLabel view, std::size_t line_no) {
  if (!arr.is_array()) throw ParseError("view tokens must be an array", line_no);
  std::vector<SvgToken> content;
  for (const auto& item : arr) {
    SvgToken t;
    t.kind = parse_svg_kind(item.at("kind").get<std::string>());
    t.params = read_params<kSvgParamCount>(item.at("params"), line_no);
    if (t.kind == SvgKind::kEos) break;
    if (!token_well_formed(t)) throw SchemaError("malformed token at line " + std::to_string(line_no));
    content.push_back(t);
  }
  return pad_drawing(content, view);
}

CadSequence cad_from_json(const json& arr, std::size_t length, std::size_t line_no) {
  if (!arr.is_array()) throw ParseError("cad must be an array", line_no);
  std::vector<CadCommand> content;
  for (const auto& item : arr) {
    CadCommand c;
    c.kind = parse_cad_kind(item.at("kind").get<std::string>());
    c.params = read_params<kCadParamCount>(item.at("params"), line_no);
    if (c.kind == CadKind::kEos) break;
    content.push_back(c);
  }
  return make_cad_sequence(content, length);
}

}  // namespace

std::string format_record(const Record& record) {
  json views = json::object();
  for (const auto& [label, seq] : record.views) views[std::string(to_string(label))] = tokens_to_json(seq);
  json j = {{"schema", kRecordSchemaVersion},
            {"id", record.id},
            {"views", views},
            {"cad", cad_to_json(record.cad)}};
  return j.dump();
}

Record parse_record(const std::string& line, std::size_t line_no, const RecordReadOptions& options) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed record: ") + e.what(), line_no);
  }
  try {
    if (!j.is_object()) throw ParseError("record must be an object", line_no);
    if (j.value("schema", -1) != kRecordSchemaVersion) {
      throw SchemaError("unsupported schema version at line " + std::to_string(line_no));
    }
    Record r;
    r.id = j.at("id").get<std::string>();
    for (const auto& [name, tokens] : j.at("views").items()) {
      const ViewLabel view = parse_view_label(name);
      r.views[view] = drawing_from_json(tokens, view, line_no);
    }
    for (ViewLabel v : options.required_views) {
      if (!r.views.contains(v)) {
        throw SchemaError("record '" + r.id + "' at line " + std::to_string(line_no) +
                          " is missing view " + std::string(to_string(v)));
      }
    }
    r.cad = cad_from_json(j.at("cad"), options.cad_length, line_no);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what(), line_no);
  }
}

void write_record(std::ostream& out, const Record& record) { out << format_record(record) << '\n'; }

std::vector<Record> read_records(std::istream& in, const RecordReadOptions& options) {
  std::vector<Record> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line, line_no, options));
  }
  return out;
}

std::vector<Record> load_dataset(const std::string& path, const RecordReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset '" + path + "'");
  return read_records(in, options);
}

void save_dataset(const std::string& path, const std::vector<Record>& records) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write dataset '" + path + "'");
  for (const auto& r : records) write_record(out, r);
}

std::uint64_t dataset_fingerprint(const std::vector<Record>& records) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& r : records) {
    for (unsigned char c : format_record(r)) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= '\n';
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace vdcad
