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
#include "vdcad/nn/params.hpp"

#include <cmath>

#include "vdcad/errors.hpp"
#include "vdcad/random.hpp"

namespace vdcad::nn {

Param& ParamStore::add(std::string name, Eigen::Index rows, Eigen::Index cols) {
  if (find(name) != nullptr) throw ContractError("duplicate parameter: " + name);
  Param& p = params_.emplace_back();
  p.name = std::move(name);
  p.value = Mat::Zero(rows, cols);
  p.grad = Mat::Zero(rows, cols);
  return p;
}

Param* ParamStore::find(const std::string& name) {
  for (auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Param& ParamStore::get(const std::string& name) {
  Param* p = find(name);
  if (p == nullptr) throw ContractError("unknown parameter: " + name);
  return *p;
}

const Param& ParamStore::get(const std::string& name) const {
  return const_cast<ParamStore*>(this)->get(name);
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

double ParamStore::grad_norm() const {
  double sum = 0.0;
  for (const auto& p : params_) sum += p.grad.squaredNorm();
  return std::sqrt(sum);
}

void fill_uniform(Mat& m, double bound, std::mt19937_64& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, -bound, bound);
}

}  // namespace vdcad::nn
