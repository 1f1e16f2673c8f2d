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
#include "vdcad/nn/graph.hpp"

#include <cmath>
#include <numbers>

#include "vdcad/errors.hpp"
#include "vdcad/nn/params.hpp"
#include "vdcad/random.hpp"

namespace vdcad::nn {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ContractError(what);
}

}  // namespace

Graph::Id Graph::push(Mat value, std::function<void()> back) {
  nodes_.push_back(Node{std::move(value), Mat(), std::move(back)});
  return static_cast<Id>(nodes_.size() - 1);
}

Mat& Graph::grad(Id id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0 && n.value.size() != 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

Graph::Id Graph::param(Param& p) {
  if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) p.zero_grad();
  const Id id = static_cast<Id>(nodes_.size());
  return push(p.value, [this, id, &p] { p.grad += nodes_[id].grad; });
}

Graph::Id Graph::constant(Mat value) { return push(std::move(value)); }

Graph::Id Graph::matmul(Id a, Id b) {
  require(value(a).cols() == value(b).rows(), "matmul: shape mismatch");
  Mat out = value(a) * value(b);
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, a, b] {
    const Mat& g = nodes_[id].grad;
    grad(a).noalias() += g * value(b).transpose();
    grad(b).noalias() += value(a).transpose() * g;
  });
}

Graph::Id Graph::linear(Id x, Id w) { return matmul(x, w); }

Graph::Id Graph::linear(Id x, Id w, Id bias) {
  require(value(x).cols() == value(w).rows(), "linear: shape mismatch");
  require(value(bias).rows() == 1 && value(bias).cols() == value(w).cols(), "linear: bad bias");
  Mat out = value(x) * value(w);
  out.rowwise() += value(bias).row(0);
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, x, w, bias] {
    const Mat& g = nodes_[id].grad;
    grad(x).noalias() += g * value(w).transpose();
    grad(w).noalias() += value(x).transpose() * g;
    grad(bias) += g.colwise().sum();
  });
}

Graph::Id Graph::add(Id a, Id b) {
  require(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(), "add: shape mismatch");
  Mat out = value(a) + value(b);
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, a, b] {
    grad(a) += nodes_[id].grad;
    grad(b) += nodes_[id].grad;
  });
}

Graph::Id Graph::scale(Id a, double s) {
  Mat out = value(a) * s;
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, a, s] { grad(a) += nodes_[id].grad * s; });
}

Graph::Id Graph::gelu(Id a) {
  const Mat& x = value(a);
  Mat out = x.unaryExpr([](double v) { return 0.5 * v * (1.0 + std::erf(v / std::numbers::sqrt2)); });
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, a] {
    const Mat d = value(a).unaryExpr([](double v) {
      const double cdf = 0.5 * (1.0 + std::erf(v / std::numbers::sqrt2));
      const double pdf = std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
      return cdf + v * pdf;
    });
    grad(a) += nodes_[id].grad.cwiseProduct(d);
  });
}

Graph::Id Graph::layer_norm(Id x, Id gamma, Id beta, double eps) {
  const Mat& in = value(x);
  const Eigen::Index n = in.rows();
  const Eigen::Index d = in.cols();
  require(value(gamma).cols() == d && value(beta).cols() == d, "layer_norm: bad affine shape");
  Mat xhat(n, d);
  Eigen::VectorXd inv_std(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double mean = in.row(r).mean();
    const double var = (in.row(r).array() - mean).square().mean();
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (in.row(r).array() - mean) * inv_std[r];
  }
  Mat out = xhat.array().rowwise() * value(gamma).row(0).array();
  out.rowwise() += value(beta).row(0);
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, x, gamma, beta, xhat = std::move(xhat), inv_std = std::move(inv_std)] {
    const Mat& g = nodes_[id].grad;
    grad(gamma) += g.cwiseProduct(xhat).colwise().sum();
    grad(beta) += g.colwise().sum();
    const Mat dxhat = g.array().rowwise() * value(gamma).row(0).array();
    Mat& gx = grad(x);
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double m1 = dxhat.row(r).mean();
      const double m2 = dxhat.row(r).dot(xhat.row(r)) / static_cast<double>(g.cols());
      gx.row(r).array() += inv_std[r] * (dxhat.row(r).array() - m1 - xhat.row(r).array() * m2);
    }
  });
}

Graph::Id Graph::dropout(Id x, double p, std::mt19937_64& rng) {
  if (p <= 0.0) return x;
  require(p < 1.0, "dropout: p must be < 1");
  const Mat& in = value(x);
  Mat mask(in.rows(), in.cols());
  const double keep = 1.0 / (1.0 - p);
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = uniform01(rng) < p ? 0.0 : keep;
  Mat out = in.cwiseProduct(mask);
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, x, mask = std::move(mask)] {
    grad(x) += nodes_[id].grad.cwiseProduct(mask);
  });
}

Graph::Id Graph::gather_rows(Id table, std::vector<int> indices) {
  const Mat& t = value(table);
  Mat out(static_cast<Eigen::Index>(indices.size()), t.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] >= 0 && indices[i] < t.rows(), "gather_rows: index out of range");
    out.row(static_cast<Eigen::Index>(i)) = t.row(indices[i]);
  }
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, table, indices = std::move(indices)] {
    const Mat& g = nodes_[id].grad;
    Mat& gt = grad(table);
    for (std::size_t i = 0; i < indices.size(); ++i) gt.row(indices[i]) += g.row(static_cast<Eigen::Index>(i));
  });
}

Graph::Id Graph::reshape(Id a, Eigen::Index rows, Eigen::Index cols) {
  const Mat& in = value(a);
  require(rows * cols == in.size(), "reshape: size mismatch");
  Mat out = Eigen::Map<const Mat>(in.data(), rows, cols);
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, a] {
    Mat& ga = grad(a);
    Eigen::Map<Mat>(ga.data(), ga.rows(), ga.cols()) +=
        Eigen::Map<const Mat>(nodes_[id].grad.data(), ga.rows(), ga.cols());
  });
}

Graph::Id Graph::concat_cols(const std::vector<Id>& parts) {
  require(!parts.empty(), "concat_cols: no inputs");
  const Eigen::Index rows = value(parts.front()).rows();
  Eigen::Index cols = 0;
  for (Id p : parts) {
    require(value(p).rows() == rows, "concat_cols: row mismatch");
    cols += value(p).cols();
  }
  Mat out(rows, cols);
  Eigen::Index at = 0;
  for (Id p : parts) {
    out.middleCols(at, value(p).cols()) = value(p);
    at += value(p).cols();
  }
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, parts] {
    Eigen::Index at = 0;
    for (Id p : parts) {
      const Eigen::Index c = value(p).cols();
      grad(p) += nodes_[id].grad.middleCols(at, c);
      at += c;
    }
  });
}

Graph::Id Graph::segment_mean(Id x, Eigen::Index group) {
  const Mat& in = value(x);
  require(group > 0 && in.rows() % group == 0, "segment_mean: rows not divisible by group");
  const Eigen::Index n = in.rows() / group;
  Mat out(n, in.cols());
  for (Eigen::Index s = 0; s < n; ++s) out.row(s) = in.middleRows(s * group, group).colwise().mean();
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, x, group, n] {
    const Mat& g = nodes_[id].grad;
    Mat& gx = grad(x);
    const double w = 1.0 / static_cast<double>(group);
    for (Eigen::Index s = 0; s < n; ++s) gx.middleRows(s * group, group).rowwise() += w * g.row(s);
  });
}

Graph::Id Graph::tile_rows(Id x, Eigen::Index times) {
  const Mat& in = value(x);
  const Eigen::Index n = in.rows();
  Mat out(n * times, in.cols());
  for (Eigen::Index t = 0; t < times; ++t) out.middleRows(t * n, n) = in;
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, x, times, n] {
    const Mat& g = nodes_[id].grad;
    Mat& gx = grad(x);
    for (Eigen::Index t = 0; t < times; ++t) gx += g.middleRows(t * n, n);
  });
}

Graph::Id Graph::repeat_rows(Id x, Eigen::Index times) {
  const Mat& in = value(x);
  Mat out(in.rows() * times, in.cols());
  for (Eigen::Index r = 0; r < in.rows(); ++r) out.middleRows(r * times, times).rowwise() = in.row(r);
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, x, times] {
    const Mat& g = nodes_[id].grad;
    Mat& gx = grad(x);
    for (Eigen::Index r = 0; r < gx.rows(); ++r) gx.row(r) += g.middleRows(r * times, times).colwise().sum();
  });
}

Graph::Id Graph::attention(Id q, Id k, Id v, int heads, Eigen::Index q_len, Eigen::Index k_len) {
  const Mat& Q = value(q);
  const Mat& K = value(k);
  const Mat& V = value(v);
  const Eigen::Index width = Q.cols();
  require(heads > 0 && width % heads == 0, "attention: width not divisible by heads");
  require(K.cols() == width && V.cols() == width && K.rows() == V.rows(), "attention: shape mismatch");
  require(q_len > 0 && k_len > 0 && Q.rows() % q_len == 0 && K.rows() % k_len == 0 &&
              Q.rows() / q_len == K.rows() / k_len,
          "attention: batch mismatch");
  const Eigen::Index batch = Q.rows() / q_len;
  const Eigen::Index hd = width / heads;
  const double inv = 1.0 / std::sqrt(static_cast<double>(hd));

  Mat out(Q.rows(), width);
  std::vector<Mat> probs(static_cast<std::size_t>(batch * heads));
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (int h = 0; h < heads; ++h) {
      const auto qb = Q.block(b * q_len, h * hd, q_len, hd);
      const auto kb = K.block(b * k_len, h * hd, k_len, hd);
      const auto vb = V.block(b * k_len, h * hd, k_len, hd);
      Mat s = (qb * kb.transpose()) * inv;
      for (Eigen::Index r = 0; r < s.rows(); ++r) {
        const double m = s.row(r).maxCoeff();
        s.row(r) = (s.row(r).array() - m).exp();
        s.row(r) /= s.row(r).sum();
      }
      out.block(b * q_len, h * hd, q_len, hd).noalias() = s * vb;
      probs[static_cast<std::size_t>(b * heads + h)] = std::move(s);
    }
  }
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, q, k, v, heads, q_len, k_len, batch, hd, inv, probs = std::move(probs)] {
    const Mat& g = nodes_[id].grad;
    Mat& gq = grad(q);
    Mat& gk = grad(k);
    Mat& gv = grad(v);
    const Mat& Q = value(q);
    const Mat& K = value(k);
    const Mat& V = value(v);
    for (Eigen::Index b = 0; b < batch; ++b) {
      for (int h = 0; h < heads; ++h) {
        const Mat& p = probs[static_cast<std::size_t>(b * heads + h)];
        const auto gb = g.block(b * q_len, h * hd, q_len, hd);
        gv.block(b * k_len, h * hd, k_len, hd).noalias() += p.transpose() * gb;
        const Mat dp = gb * V.block(b * k_len, h * hd, k_len, hd).transpose();
        Mat ds = p.cwiseProduct(dp);
        const Eigen::VectorXd rs = ds.rowwise().sum();
        ds -= p.cwiseProduct(rs.replicate(1, p.cols()));
        ds *= inv;
        gq.block(b * q_len, h * hd, q_len, hd).noalias() += ds * K.block(b * k_len, h * hd, k_len, hd);
        gk.block(b * k_len, h * hd, k_len, hd).noalias() += ds.transpose() * Q.block(b * q_len, h * hd, q_len, hd);
      }
    }
  });
}

Graph::Id Graph::soft_cross_entropy(Id logits, std::vector<SparseTarget> targets, double weight) {
  const Mat& x = value(logits);
  require(static_cast<Eigen::Index>(targets.size()) == x.rows(), "soft_cross_entropy: one target per row");
  Mat prob(x.rows(), x.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double m = x.row(r).maxCoeff();
    const double lse = m + std::log((x.row(r).array() - m).exp().sum());
    prob.row(r) = (x.row(r).array() - lse).exp();
    for (const auto& [k, t] : targets[static_cast<std::size_t>(r)]) {
      require(k >= 0 && k < x.cols(), "soft_cross_entropy: target index out of range");
      loss -= t * (x(r, k) - lse);
    }
  }
  Mat out(1, 1);
  out(0, 0) = weight * loss;
  const Id id = static_cast<Id>(nodes_.size());
  return push(std::move(out), [this, id, logits, weight, prob = std::move(prob), targets = std::move(targets)] {
    const double g = nodes_[id].grad(0, 0) * weight;
    Mat& gx = grad(logits);
    for (Eigen::Index r = 0; r < prob.rows(); ++r) {
      double mass = 0.0;
      for (const auto& [k, t] : targets[static_cast<std::size_t>(r)]) mass += t;
      gx.row(r) += g * mass * prob.row(r);
      for (const auto& [k, t] : targets[static_cast<std::size_t>(r)]) gx(r, k) -= g * t;
    }
  });
}

void Graph::backward(Id root) {
  require(value(root).rows() == 1 && value(root).cols() == 1, "backward: root must be a scalar");
  grad(root)(0, 0) += 1.0;
  for (Id i = root; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.back && n.grad.size() != 0) n.back();
  }
}

}  // namespace vdcad::nn
