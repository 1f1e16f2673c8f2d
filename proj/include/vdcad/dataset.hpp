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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vdcad/cad_core.hpp"
#include "vdcad/svg_core.hpp"

namespace vdcad {

inline constexpr int kRecordSchemaVersion = 1;

// One paired sample: drawings per view and the CAD sequence that produced them.
struct Record {
  std::string id;
  std::map<ViewLabel, DrawingSequence> views;
  CadSequence cad;
  friend bool operator==(const Record&, const Record&) = default;
};

struct RecordReadOptions {
  std::vector<ViewLabel> required_views;  // empty: accept whatever is present
  std::size_t cad_length = kDefaultCadLength;
};

// Newline-delimited JSON: {"schema":1,"id":..,"views":{..},"cad":[..]}.
// Sequences are written up to and including their first EOS and re-padded on
// read.
std::string format_record(const Record& record);
Record parse_record(const std::string& line, std::size_t line_no,
                    const RecordReadOptions& options = {});

void write_record(std::ostream& out, const Record& record);
// Reads every non-blank line. Errors carry the 1-based line number.
std::vector<Record> read_records(std::istream& in, const RecordReadOptions& options = {});

std::vector<Record> load_dataset(const std::string& path, const RecordReadOptions& options = {});
void save_dataset(const std::string& path, const std::vector<Record>& records);

// FNV-1a over the serialized records.
std::uint64_t dataset_fingerprint(const std::vector<Record>& records);

}  // namespace vdcad
