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
#include "vdcad/train.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>

#include "vdcad/checkpoint.hpp"
#include "vdcad/errors.hpp"
#include "vdcad/random.hpp"

namespace vdcad {

namespace {

// Stream ids for mix_seed so that independent uses of one seed never share a
// generator.
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamShuffle = 0x100000;
constexpr std::uint64_t kStreamDropout = 0x200000000ull;

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(rng() % i)]);
}

}  // namespace

DatasetSplit split_dataset(std::vector<Record> records, const std::array<double, 3>& ratios, std::uint64_t seed) {
  if (records.empty()) throw ContractError("split_dataset: empty input");
  for (double r : ratios) {
    if (r < 0.0) throw ContractError("split_dataset: negative ratio");
  }
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9) throw ContractError("split_dataset: ratios must sum to 1");
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  shuffle(order, rng);
  const auto n = records.size();
  const auto n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n) + 1e-9));
  const auto n_test = static_cast<std::size_t>(std::floor(ratios[2] * static_cast<double>(n) + 1e-9));
  const auto n_train = n - n_val - n_test;
  DatasetSplit s;
  for (std::size_t i = 0; i < n; ++i) {
    auto& dst = i < n_train ? s.train : (i < n_train + n_val ? s.val : s.test);
    dst.push_back(std::move(records[order[i]]));
  }
  return s;
}

double learning_rate(const TrainConfig& config, long step) {
  if (step < 1) throw ContractError("learning_rate: steps are 1-based");
  if (config.warmup_steps <= 0) return config.lr;
  return config.lr * std::min(1.0, static_cast<double>(step) / config.warmup_steps);
}

std::vector<DrawingSequence> model_views(const Record& record, ViewMode mode) {
  std::vector<DrawingSequence> out;
  std::string missing;
  for (ViewLabel v : views_for(mode)) {
    const auto it = record.views.find(v);
    if (it == record.views.end()) {
      missing += (missing.empty() ? "" : ", ") + std::string(to_string(v));
      continue;
    }
    out.push_back(it->second);
  }
  if (!missing.empty()) throw InputError("record '" + record.id + "' is missing views: " + missing);
  return out;
}

// ---------------------------------------------------------------------------
// Trainer

Trainer::Trainer(RunConfig config, std::vector<Record> data)
    : config_(std::move(config)),
      data_(std::move(data)),
      model_(config_.model, mix_seed(config_.train.seed, kStreamInit)) {
  config_.train.validate();
  if (data_.empty()) throw ContractError("train: empty dataset");
  const auto n_c = static_cast<std::size_t>(config_.model.cad_len);
  for (const auto& r : data_) {
    if (r.cad.content().size() + 1 > n_c) throw LengthExceededError(r.cad.content().size() + 1, n_c);
    inputs_.push_back(model_views(r, config_.model.view_mode));
    cmd_targets_.push_back(command_targets(r.cad, n_c));
    arg_targets_.push_back(argument_targets(r.cad, n_c, config_.train.alpha, config_.train.tolerance,
                                            config_.train.mask_unused));
  }
  if (steps_per_epoch() < 1) throw ContractError("train: batch size exceeds dataset size");
  for (const auto& p : model_.params().all()) {
    adam_m_[p.name] = nn::Mat::Zero(p.value.rows(), p.value.cols());
    adam_v_[p.name] = nn::Mat::Zero(p.value.rows(), p.value.cols());
  }
}

long Trainer::steps_per_epoch() const {
  return static_cast<long>(data_.size()) / config_.train.batch_size;
}

long Trainer::total_steps() const {
  return config_.train.max_steps > 0 ? config_.train.max_steps : config_.train.epochs * steps_per_epoch();
}

std::vector<std::size_t> Trainer::epoch_order(int epoch) const {
  if (epoch != cached_epoch_) {
    cached_order_.resize(data_.size());
    std::iota(cached_order_.begin(), cached_order_.end(), 0);
    std::mt19937_64 rng(mix_seed(config_.train.seed, kStreamShuffle + static_cast<std::uint64_t>(epoch)));
    shuffle(cached_order_, rng);
    cached_epoch_ = epoch;
  }
  return cached_order_;
}

StepStats Trainer::step() {
  const auto& tc = config_.train;
  const long spe = steps_per_epoch();
  const int epoch = static_cast<int>(step_ / spe);
  const long slot = step_ % spe;
  const auto order = epoch_order(epoch);
  const auto batch = static_cast<std::size_t>(tc.batch_size);

  std::vector<std::vector<DrawingSequence>> samples;
  std::vector<nn::SparseTarget> cmd_t;
  std::vector<nn::SparseTarget> arg_t;
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t idx = order[static_cast<std::size_t>(slot) * batch + i];
    samples.push_back(inputs_[idx]);
    cmd_t.insert(cmd_t.end(), cmd_targets_[idx].begin(), cmd_targets_[idx].end());
    arg_t.insert(arg_t.end(), arg_targets_[idx].begin(), arg_targets_[idx].end());
  }
  const TokenBatch tokens = make_token_batch(samples, config_.model);
  std::mt19937_64 drop_rng(mix_seed(tc.seed, kStreamDropout + static_cast<std::uint64_t>(step_)));

  nn::Graph g;
  const auto out = model_.forward(g, tokens, config_.model.dropout > 0.0 ? &drop_rng : nullptr);
  const double rows = static_cast<double>(batch) * config_.model.cad_len;
  const auto cmd = g.soft_cross_entropy(out.cmd_logits, std::move(cmd_t), 1.0 / rows);
  const auto args = g.soft_cross_entropy(out.arg_logits, std::move(arg_t), 1.0 / (rows * kCadParamCount));
  const auto total = g.add(cmd, g.scale(args, tc.beta));

  StepStats st;
  st.step = step_ + 1;
  st.epoch = epoch;
  st.cmd_loss = g.value(cmd)(0, 0);
  st.args_loss = g.value(args)(0, 0);
  st.loss = g.value(total)(0, 0);
  if (!std::isfinite(st.loss)) throw TrainingError(st.step, "");

  auto& params = model_.params();
  params.zero_grad();
  g.backward(total);
  st.grad_norm = params.grad_norm();
  const double factor = st.grad_norm > tc.clip ? tc.clip / st.grad_norm : 1.0;
  st.lr = learning_rate(tc, st.step);
  const double c1 = 1.0 - std::pow(tc.adam_beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(tc.adam_beta2, static_cast<double>(st.step));
  double clipped = 0.0;
  for (auto& p : params.all()) {
    nn::Mat& m = adam_m_.at(p.name);
    nn::Mat& v = adam_v_.at(p.name);
    const nn::Mat grad = p.grad * factor;
    clipped += grad.squaredNorm();
    m = tc.adam_beta1 * m + (1.0 - tc.adam_beta1) * grad;
    v = tc.adam_beta2 * v + (1.0 - tc.adam_beta2) * grad.cwiseProduct(grad);
    p.value.array() -= st.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + tc.adam_eps);
  }
  st.clipped_norm = std::sqrt(clipped);
  ++step_;
  return st;
}

void Trainer::save_state(const std::string& path) const {
  Checkpoint ckpt;
  ckpt.config_text = format_config(config_);
  for (const auto& p : model_.params().all()) ckpt.tensors.push_back({"param/" + p.name, p.value});
  for (const auto& p : model_.params().all()) ckpt.tensors.push_back({"adam_m/" + p.name, adam_m_.at(p.name)});
  for (const auto& p : model_.params().all()) ckpt.tensors.push_back({"adam_v/" + p.name, adam_v_.at(p.name)});
  nn::Mat step(1, 1);
  step(0, 0) = static_cast<double>(step_);
  ckpt.tensors.push_back({"state/step", step});
  write_checkpoint(path, ckpt, TensorType::kF64);
}

void Trainer::load_state(const std::string& path) {
  const Checkpoint ckpt = read_checkpoint(path);
  auto fetch = [&](const std::string& name, const nn::Mat& like) -> const nn::Mat& {
    const NamedTensor* t = ckpt.find(name);
    if (t == nullptr) throw InputError("checkpoint '" + path + "' lacks tensor " + name);
    if (t->value.rows() != like.rows() || t->value.cols() != like.cols()) {
      throw InputError("checkpoint tensor " + name + " has the wrong shape");
    }
    return t->value;
  };
  for (auto& p : model_.params().all()) {
    p.value = fetch("param/" + p.name, p.value);
    adam_m_[p.name] = fetch("adam_m/" + p.name, p.value);
    adam_v_[p.name] = fetch("adam_v/" + p.name, p.value);
  }
  step_ = static_cast<long>(fetch("state/step", nn::Mat(1, 1))(0, 0));
}

// ---------------------------------------------------------------------------
// Models, inference, evaluation

void save_model(const std::string& path, const Model& model) {
  RunConfig rc;
  rc.model = model.config();
  Checkpoint ckpt;
  ckpt.config_text = format_config(rc);
  for (const auto& p : model.params().all()) ckpt.tensors.push_back({p.name, p.value});
  write_checkpoint(path, ckpt, TensorType::kF32);
}

Model load_model(const std::string& path) {
  const Checkpoint ckpt = read_checkpoint(path);
  const RunConfig rc = parse_config_text(ckpt.config_text);
  Model model(rc.model, 0);
  if (ckpt.tensors.size() != model.params().all().size()) {
    throw InputError("checkpoint '" + path + "' does not match its configuration");
  }
  for (auto& p : model.params().all()) {
    const NamedTensor* t = ckpt.find(p.name);
    if (t == nullptr) throw InputError("checkpoint '" + path + "' lacks tensor " + p.name);
    if (t->value.rows() != p.value.rows() || t->value.cols() != p.value.cols()) {
      throw InputError("checkpoint tensor " + p.name + " has the wrong shape");
    }
    p.value = t->value;
  }
  return model;
}

std::vector<CadSequence> infer(const Model& model, std::span<const std::vector<DrawingSequence>> samples,
                               std::size_t batch_size) {
  const auto n_c = static_cast<Eigen::Index>(model.config().cad_len);
  const auto per = n_c * static_cast<Eigen::Index>(kCadParamCount);
  std::vector<CadSequence> out;
  out.reserve(samples.size());
  for (std::size_t begin = 0; begin < samples.size(); begin += batch_size) {
    const auto chunk = samples.subspan(begin, std::min(batch_size, samples.size() - begin));
    const TokenBatch tokens = make_token_batch(chunk, model.config());
    nn::Graph g;
    const auto heads = model.forward(g, tokens, nullptr);
    const nn::Mat& cmd = g.value(heads.cmd_logits);
    const nn::Mat& arg = g.value(heads.arg_logits);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      out.push_back(predict(cmd.middleRows(k * n_c, n_c), arg.middleRows(k * per, per)));
    }
  }
  return out;
}

MetricsReport evaluate(const Model& model, std::span<const Record> records, std::size_t sample_count,
                       std::uint64_t seed) {
  if (records.empty()) throw ContractError("evaluate: empty record set");
  std::vector<std::vector<DrawingSequence>> inputs;
  std::vector<CadSequence> gts;
  for (const auto& r : records) {
    inputs.push_back(model_views(r, model.config().view_mode));
    gts.push_back(r.cad.padded(static_cast<std::size_t>(model.config().cad_len)));
  }
  const auto preds = infer(model, inputs);
  return evaluate_set(preds, gts, sample_count, seed);
}

// ---------------------------------------------------------------------------
// Runs

void RunManifest::write(std::ostream& out) const {
  const auto old = out.precision(10);
  out << "[config]\n" << config_text << "[dataset]\nfingerprint = " << dataset_fingerprint << "\n[epochs]\n";
  for (const auto& e : epochs) {
    out << "epoch = " << e.epoch << " loss = " << e.mean_loss;
    if (e.validation) {
      out << " val_acc_cmd = " << 100.0 * e.validation->acc_cmd << " val_acc_param = " << 100.0 * e.validation->acc_param
          << " val_ir = " << 100.0 * e.validation->ir << " val_mcd = " << 100.0 * e.validation->mcd;
    }
    out << '\n';
  }
  out << "[checkpoints]\n";
  for (const auto& c : checkpoints) out << c << '\n';
  out.precision(old);
}

RunManifest train(const RunConfig& config, std::vector<Record> data, const TrainOptions& options) {
  namespace fs = std::filesystem;
  if (options.out_dir.empty()) throw ContractError("train: output directory required");
  fs::create_directories(options.out_dir);
  const fs::path dir(options.out_dir);

  RunManifest manifest;
  manifest.config_text = format_config(config);
  manifest.dataset_fingerprint = dataset_fingerprint(data);
  Trainer trainer(config, std::move(data));
  const long spe = trainer.steps_per_epoch();
  const long total = trainer.total_steps();
  std::string last_good;
  auto write_manifest = [&] {
    std::ofstream out(dir / "manifest.txt");
    manifest.write(out);
  };

  double epoch_loss = 0.0;
  long epoch_steps = 0;
  while (trainer.steps_done() < total) {
    StepStats st;
    try {
      st = trainer.step();
    } catch (const TrainingError& e) {
      write_manifest();
      throw TrainingError(e.step(), last_good);
    }
    if (options.on_step) options.on_step(st);
    epoch_loss += st.loss;
    ++epoch_steps;
    const bool epoch_end = st.step % spe == 0;
    if (!epoch_end && st.step != total) continue;
    EpochRecord rec;
    rec.epoch = st.epoch + 1;
    rec.mean_loss = epoch_loss / static_cast<double>(epoch_steps);
    epoch_loss = 0.0;
    epoch_steps = 0;
    const int every = config.train.checkpoint_every;
    if (every > 0 && epoch_end && rec.epoch % every == 0) {
      if (!options.validation.empty()) {
        rec.validation = evaluate(trainer.model(), options.validation,
                                  static_cast<std::size_t>(config.train.eval_samples), config.train.seed);
      }
      char name[32];
      std::snprintf(name, sizeof name, "epoch_%04d.ckpt", rec.epoch);
      save_model((dir / name).string(), trainer.model());
      trainer.save_state((dir / "state.ckpt").string());
      last_good = (dir / name).string();
      manifest.checkpoints.push_back(last_good);
    }
    manifest.epochs.push_back(rec);
  }
  save_model((dir / "model.ckpt").string(), trainer.model());
  trainer.save_state((dir / "state.ckpt").string());
  manifest.checkpoints.push_back((dir / "model.ckpt").string());
  write_manifest();
  return manifest;
}

}  // namespace vdcad
