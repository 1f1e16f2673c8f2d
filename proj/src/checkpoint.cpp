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
#include "vdcad/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "vdcad/errors.hpp"

namespace vdcad {

namespace {

constexpr char kMagic[8] = {'V', 'D', 'C', 'A', 'D', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw InputError("truncated checkpoint '" + path + "'");
  return v;
}

std::string get_string(std::istream& in, std::uint64_t n, const std::string& path) {
  if (n > (1u << 30)) throw InputError("corrupt checkpoint '" + path + "'");
  std::string s(n, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(n))) throw InputError("truncated checkpoint '" + path + "'");
  return s;
}

}  // namespace

const NamedTensor* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void write_checkpoint(const std::string& path, const Checkpoint& ckpt, TensorType type) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write checkpoint '" + path + "'");
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, ckpt.config_text.size());
    out.write(ckpt.config_text.data(), static_cast<std::streamsize>(ckpt.config_text.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
    for (const auto& t : ckpt.tensors) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
      out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
      put<std::uint8_t>(out, static_cast<std::uint8_t>(type));
      put<std::uint64_t>(out, static_cast<std::uint64_t>(t.value.rows()));
      put<std::uint64_t>(out, static_cast<std::uint64_t>(t.value.cols()));
      for (Eigen::Index i = 0; i < t.value.size(); ++i) {
        if (type == TensorType::kF32) {
          put<float>(out, static_cast<float>(t.value.data()[i]));
        } else {
          put<double>(out, t.value.data()[i]);
        }
      }
    }
    if (!out) throw InputError("failed writing checkpoint '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("cannot move checkpoint into '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint '" + path + "'");
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw InputError("'" + path + "' is not a checkpoint");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kVersion) throw InputError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ckpt;
  ckpt.config_text = get_string(in, get<std::uint64_t>(in, path), path);
  const auto count = get<std::uint32_t>(in, path);
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedTensor t;
    t.name = get_string(in, get<std::uint32_t>(in, path), path);
    const auto type = static_cast<TensorType>(get<std::uint8_t>(in, path));
    const auto rows = get<std::uint64_t>(in, path);
    const auto cols = get<std::uint64_t>(in, path);
    if (rows * cols > (1ull << 32)) throw InputError("corrupt checkpoint '" + path + "'");
    t.value.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < t.value.size(); ++i) {
      if (type == TensorType::kF32) {
        t.value.data()[i] = get<float>(in, path);
      } else if (type == TensorType::kF64) {
        t.value.data()[i] = get<double>(in, path);
      } else {
        throw InputError("unknown tensor type in '" + path + "'");
      }
    }
    ckpt.tensors.push_back(std::move(t));
  }
  return ckpt;
}

}  // namespace vdcad
