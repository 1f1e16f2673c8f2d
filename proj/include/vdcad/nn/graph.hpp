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
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace vdcad::nn {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Param;

// Sparse target distribution over the columns of one logits row.
using SparseTarget = std::vector<std::pair<int, double>>;

// Reverse-mode tape over row-major matrices. Nodes are appended in evaluation
// order; backward() walks them in reverse. Parameter leaves accumulate their
// gradient into Param::grad.
class Graph {
 public:
  using Id = int;

  Id param(Param& p);
  Id constant(Mat value);

  const Mat& value(Id id) const { return nodes_[id].value; }
  std::size_t size() const { return nodes_.size(); }

  Id matmul(Id a, Id b);
  // x * w + bias (bias is a 1 x out row, broadcast over rows).
  Id linear(Id x, Id w, Id bias);
  Id linear(Id x, Id w);
  Id add(Id a, Id b);
  Id scale(Id a, double s);
  Id gelu(Id a);
  Id layer_norm(Id x, Id gamma, Id beta, double eps = 1e-5);
  // Inverted dropout; identity when p == 0.
  Id dropout(Id x, double p, std::mt19937_64& rng);
  Id gather_rows(Id table, std::vector<int> indices);
  // Row-major reinterpretation, no data movement in the math.
  Id reshape(Id a, Eigen::Index rows, Eigen::Index cols);
  Id concat_cols(const std::vector<Id>& parts);
  // Means over consecutive groups of `group` rows.
  Id segment_mean(Id x, Eigen::Index group);
  // Stacks `times` copies of x vertically.
  Id tile_rows(Id x, Eigen::Index times);
  // Repeats each row of x `times` times in place.
  Id repeat_rows(Id x, Eigen::Index times);
  // Scaled dot-product attention per batch element and head. q has
  // batch * q_len rows, k and v have batch * k_len rows, all with width
  // heads * head_dim.
  Id attention(Id q, Id k, Id v, int heads, Eigen::Index q_len, Eigen::Index k_len);
  // weight * sum_r sum_k -t_rk log softmax(x_r)_k; one target per row.
  Id soft_cross_entropy(Id logits, std::vector<SparseTarget> targets, double weight);

  // Seeds d(root)/d(root) = 1; root must be 1 x 1.
  void backward(Id root);

 private:
  struct Node {
    Mat value;
    Mat grad;
    std::function<void()> back;
  };

  Id push(Mat value, std::function<void()> back = {});
  Mat& grad(Id id);

  std::vector<Node> nodes_;
};

}  // namespace vdcad::nn
