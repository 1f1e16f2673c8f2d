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
#include "vdcad/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vdcad/errors.hpp"

namespace vdcad {

void TrainConfig::validate() const {
  if (!(lr > 0.0) || warmup_steps < 0 || !(clip > 0.0) || batch_size < 1 || epochs < 1 || max_steps < 0 ||
      checkpoint_every < 0 || !(beta > 0.0) || !(alpha > 0.0) || tolerance < 0 || eval_samples < 1) {
    throw ContractError("train config: values must be positive");
  }
}

RunConfig full_profile() { return RunConfig{}; }

RunConfig desk_profile() {
  RunConfig c;
  c.model.d_embed = 64;
  c.model.blocks = 2;
  c.model.heads = 4;
  c.model.ff_dim = 128;
  c.model.dropout = 0.0;
  c.model.view_mode = ViewMode::kIso;
  c.model.cad_len = 16;
  c.train.batch_size = 32;
  c.train.warmup_steps = 200;
  c.train.epochs = 500;
  c.train.checkpoint_every = 0;
  c.train.seed = 7;
  return c;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InputError("config: bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw InputError("config: bad boolean '" + std::string(text) + "' for " + std::string(key));
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  auto& m = c.model;
  auto& t = c.train;
  try {
    if (key == "d_embed") m.d_embed = parse_number<int>(key, value);
    else if (key == "blocks") m.blocks = parse_number<int>(key, value);
    else if (key == "heads") m.heads = parse_number<int>(key, value);
    else if (key == "ff_dim") m.ff_dim = parse_number<int>(key, value);
    else if (key == "dropout") m.dropout = parse_number<double>(key, value);
    else if (key == "view_mode") m.view_mode = parse_view_mode(value);
    else if (key == "seq_len") m.seq_len = parse_number<int>(key, value);
    else if (key == "cad_len") m.cad_len = parse_number<int>(key, value);
    else if (key == "fusion") m.fusion = parse_fusion(value);
    else if (key == "guidance") m.guidance = parse_bool(key, value);
    else if (key == "lr") t.lr = parse_number<double>(key, value);
    else if (key == "warmup_steps") t.warmup_steps = parse_number<int>(key, value);
    else if (key == "clip") t.clip = parse_number<double>(key, value);
    else if (key == "batch_size") t.batch_size = parse_number<int>(key, value);
    else if (key == "epochs") t.epochs = parse_number<int>(key, value);
    else if (key == "max_steps") t.max_steps = parse_number<long>(key, value);
    else if (key == "checkpoint_every") t.checkpoint_every = parse_number<int>(key, value);
    else if (key == "seed") t.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "beta") t.beta = parse_number<double>(key, value);
    else if (key == "alpha") t.alpha = parse_number<double>(key, value);
    else if (key == "tolerance") t.tolerance = parse_number<int>(key, value);
    else if (key == "mask_unused") t.mask_unused = parse_bool(key, value);
    else if (key == "adam_beta1") t.adam_beta1 = parse_number<double>(key, value);
    else if (key == "adam_beta2") t.adam_beta2 = parse_number<double>(key, value);
    else if (key == "adam_eps") t.adam_eps = parse_number<double>(key, value);
    else if (key == "eval_samples") t.eval_samples = parse_number<int>(key, value);
    else throw InputError("config: unknown key '" + std::string(key) + "'");
  } catch (const ContractError& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

RunConfig parse_config_text(std::string_view text, const RunConfig& base) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  RunConfig c = base;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "profile") {
      if (value == "desk") c = desk_profile();
      else if (value == "full") c = full_profile();
      else throw InputError("config: unknown profile '" + value + "'");
      continue;
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  for (const auto& [k, v] : entries) apply_setting(c, k, v);
  c.model.validate();
  c.train.validate();
  return c;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), base);
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  const auto& m = c.model;
  const auto& t = c.train;
  out << "d_embed = " << m.d_embed << '\n'
      << "blocks = " << m.blocks << '\n'
      << "heads = " << m.heads << '\n'
      << "ff_dim = " << m.ff_dim << '\n'
      << "dropout = " << m.dropout << '\n'
      << "view_mode = " << to_string(m.view_mode) << '\n'
      << "seq_len = " << m.seq_len << '\n'
      << "cad_len = " << m.cad_len << '\n'
      << "fusion = " << to_string(m.fusion) << '\n'
      << "guidance = " << (m.guidance ? "on" : "off") << '\n'
      << "lr = " << t.lr << '\n'
      << "warmup_steps = " << t.warmup_steps << '\n'
      << "clip = " << t.clip << '\n'
      << "batch_size = " << t.batch_size << '\n'
      << "epochs = " << t.epochs << '\n'
      << "max_steps = " << t.max_steps << '\n'
      << "checkpoint_every = " << t.checkpoint_every << '\n'
      << "seed = " << t.seed << '\n'
      << "beta = " << t.beta << '\n'
      << "alpha = " << t.alpha << '\n'
      << "tolerance = " << t.tolerance << '\n'
      << "mask_unused = " << (t.mask_unused ? "on" : "off") << '\n'
      << "adam_beta1 = " << t.adam_beta1 << '\n'
      << "adam_beta2 = " << t.adam_beta2 << '\n'
      << "adam_eps = " << t.adam_eps << '\n'
      << "eval_samples = " << t.eval_samples << '\n';
  return out.str();
}

std::uint64_t seed_override(std::uint64_t fallback) {
  const char* env = std::getenv("D2C_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  return parse_number<std::uint64_t>("D2C_SEED", env);
}

void apply_seed_override(RunConfig& config) { config.train.seed = seed_override(config.train.seed); }

}  // namespace vdcad
