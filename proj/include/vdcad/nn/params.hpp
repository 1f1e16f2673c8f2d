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
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "vdcad/nn/graph.hpp"

namespace vdcad::nn {

struct Param {
  std::string name;
  Mat value;
  Mat grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

// Named parameters in registration order. Addresses are stable.
class ParamStore {
 public:
  Param& add(std::string name, Eigen::Index rows, Eigen::Index cols);
  Param& get(const std::string& name);
  const Param& get(const std::string& name) const;
  Param* find(const std::string& name);

  std::deque<Param>& all() { return params_; }
  const std::deque<Param>& all() const { return params_; }

  void zero_grad();
  std::size_t scalar_count() const;
  double grad_norm() const;

 private:
  std::deque<Param> params_;
};

// U(-bound, bound) fill with the portable generator.
void fill_uniform(Mat& m, double bound, std::mt19937_64& rng);

}  // namespace vdcad::nn
