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
// Command-line front end: data generation, ingest, training, evaluation,
// inference and reconstruction.

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vdcad/checkpoint.hpp"
#include "vdcad/config.hpp"
#include "vdcad/dataset.hpp"
#include "vdcad/errors.hpp"
#include "vdcad/geom_kernel.hpp"
#include "vdcad/svg_ingest.hpp"
#include "vdcad/synth_data.hpp"
#include "vdcad/train.hpp"

namespace {

using namespace vdcad;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

void write_drawing(std::ostream& out, const DrawingSequence& d) {
  out << "view " << to_string(d.view) << '\n';
  for (const auto& t : d.tokens) {
    out << to_string(t.kind);
    for (int p : t.params) out << ' ' << p;
    out << '\n';
  }
}

std::array<double, 3> parse_ratios(const std::string& text) {
  std::array<double, 3> r{};
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i == 3) throw InputError("--ratios takes three comma-separated values");
    r[i++] = std::stod(item);
  }
  if (i != 3) throw InputError("--ratios takes three comma-separated values");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Engineering drawings to sketch-extrude CAD sequences"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "Generate synthetic drawing/CAD pairs");
  std::size_t gen_count = 64;
  std::uint64_t gen_seed = 0;
  std::string gen_spec = "default";
  std::string gen_out;
  std::string gen_svg_dir;
  gen->add_option("--count", gen_count)->required();
  gen->add_option("--seed", gen_seed);
  gen->add_option("--spec", gen_spec, "default, rect, circle, single, rect-single or key=value list");
  gen->add_option("--out", gen_out, "dataset file (JSON lines)")->required();
  gen->add_option("--svg-dir", gen_svg_dir, "also write one SVG per view here");

  auto* ingest = app.add_subcommand("ingest", "Convert SVG files into drawing token sequences");
  std::string ingest_view;
  std::string ingest_out;
  std::vector<std::string> ingest_files;
  ingest->add_option("--view", ingest_view, "Front, Top, Right or Isometric")->required();
  ingest->add_option("--out", ingest_out)->required();
  ingest->add_option("files", ingest_files)->required();

  auto* split = app.add_subcommand("split", "Split a dataset into train/val/test");
  std::string split_data;
  std::string split_ratios = "0.9,0.05,0.05";
  std::uint64_t split_seed = 0;
  std::string split_prefix;
  split->add_option("--data", split_data)->required();
  split->add_option("--ratios", split_ratios);
  split->add_option("--seed", split_seed);
  split->add_option("--out-prefix", split_prefix, "writes PREFIX.{train,val,test}.jsonl")->required();

  auto* train_cmd = app.add_subcommand("train", "Train a model");
  std::string train_config;
  std::string train_data;
  std::string train_val;
  std::string train_out;
  std::string train_profile;
  std::vector<std::string> train_set;
  train_cmd->add_option("--config", train_config, "key = value file");
  train_cmd->add_option("--profile", train_profile, "desk or full base profile");
  train_cmd->add_option("--data", train_data)->required();
  train_cmd->add_option("--val", train_val, "validation records for periodic metrics");
  train_cmd->add_option("--out", train_out)->required();
  train_cmd->add_option("--set", train_set, "key=value override, repeatable");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  std::string eval_ckpt;
  std::string eval_data;
  std::string eval_report;
  std::size_t eval_samples = kDefaultSampleCount;
  std::uint64_t eval_seed = 0;
  eval->add_option("--ckpt", eval_ckpt)->required();
  eval->add_option("--data", eval_data)->required();
  eval->add_option("--report", eval_report)->required();
  eval->add_option("--samples", eval_samples);
  eval->add_option("--seed", eval_seed);

  auto* infer_cmd = app.add_subcommand("infer", "Predict a CAD sequence from SVG views");
  std::string infer_ckpt;
  std::vector<std::string> infer_svgs;
  std::string infer_mode;
  std::string infer_out;
  infer_cmd->add_option("--ckpt", infer_ckpt)->required();
  infer_cmd->add_option("--svg", infer_svgs, "SVG files in stacking order: Front Top Right Isometric")->required();
  infer_cmd->add_option("--view-mode", infer_mode, "iso, ortho or all")->required();
  infer_cmd->add_option("--out", infer_out, "CAD sequence file (stdout if omitted)");

  auto* recon = app.add_subcommand("reconstruct", "Rebuild a solid and sample its surface");
  std::string recon_seq;
  std::string recon_points;
  std::size_t recon_samples = kDefaultSampleCount;
  std::uint64_t recon_seed = 0;
  recon->add_option("--seq", recon_seq)->required();
  recon->add_option("--points-out", recon_points);
  recon->add_option("--samples", recon_samples);
  recon->add_option("--seed", recon_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const GenSpec spec = parse_gen_spec(gen_spec);
      const auto records = generate_dataset(spec, gen_count, seed_override(gen_seed));
      save_dataset(gen_out, records);
      if (!gen_svg_dir.empty()) {
        std::filesystem::create_directories(gen_svg_dir);
        for (const auto& r : records) {
          for (const auto& [view, drawing] : r.views) {
            auto out = open_out(gen_svg_dir + "/" + r.id + "_" + std::string(to_string(view)) + ".svg");
            out << drawing_to_svg(drawing);
          }
        }
      }
      std::cout << "wrote " << records.size() << " records to " << gen_out << '\n';
    } else if (*ingest) {
      const ViewLabel view = parse_view_label(ingest_view);
      auto out = open_out(ingest_out);
      for (const auto& f : ingest_files) {
        out << "# " << f << '\n';
        write_drawing(out, drawing_from_svg_file(f, view));
      }
    } else if (*split) {
      auto records = load_dataset(split_data);
      const auto parts = split_dataset(std::move(records), parse_ratios(split_ratios), seed_override(split_seed));
      save_dataset(split_prefix + ".train.jsonl", parts.train);
      save_dataset(split_prefix + ".val.jsonl", parts.val);
      save_dataset(split_prefix + ".test.jsonl", parts.test);
      std::cout << "train " << parts.train.size() << " val " << parts.val.size() << " test " << parts.test.size()
                << '\n';
    } else if (*train_cmd) {
      RunConfig base = train_profile == "desk" ? desk_profile() : full_profile();
      if (!train_profile.empty() && train_profile != "desk" && train_profile != "full") {
        throw InputError("unknown profile '" + train_profile + "'");
      }
      RunConfig config = train_config.empty() ? base : load_config_file(train_config, base);
      for (const auto& kv : train_set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value");
        apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      apply_seed_override(config);
      config.model.validate();
      config.train.validate();
      TrainOptions options;
      options.out_dir = train_out;
      if (!train_val.empty()) options.validation = load_dataset(train_val);
      options.on_step = [](const StepStats& st) {
        if (st.step % 50 == 0) {
          std::cout << "step " << st.step << " loss " << st.loss << " cmd " << st.cmd_loss << " args "
                    << st.args_loss << " lr " << st.lr << '\n';
        }
      };
      train(config, load_dataset(train_data), options);
      std::cout << "wrote " << train_out << "/model.ckpt\n";
    } else if (*eval) {
      const Model model = load_model(eval_ckpt);
      const auto records = load_dataset(eval_data);
      const auto report = evaluate(model, records, eval_samples, seed_override(eval_seed));
      auto out = open_out(eval_report);
      write_report(out, report);
      write_report(std::cout, report);
    } else if (*infer_cmd) {
      const Model model = load_model(infer_ckpt);
      const ViewMode mode = parse_view_mode(infer_mode);
      if (mode != model.config().view_mode) {
        throw InputError("checkpoint expects view mode " + std::string(to_string(model.config().view_mode)));
      }
      const auto order = views_for(mode);
      if (infer_svgs.size() != order.size()) {
        std::string missing;
        for (std::size_t i = infer_svgs.size(); i < order.size(); ++i) {
          missing += (missing.empty() ? "" : ", ") + std::string(to_string(order[i]));
        }
        throw InputError(missing.empty() ? "too many SVG files for view mode " + infer_mode
                                         : "missing views: " + missing);
      }
      std::vector<DrawingSequence> views;
      for (std::size_t i = 0; i < order.size(); ++i) views.push_back(drawing_from_svg_file(infer_svgs[i], order[i]));
      const std::vector<std::vector<DrawingSequence>> samples{views};
      const auto preds = infer(model, samples);
      if (infer_out.empty()) {
        write_cad_text(std::cout, preds.front());
      } else {
        auto out = open_out(infer_out);
        write_cad_text(out, preds.front());
      }
    } else if (*recon) {
      std::ifstream in(recon_seq);
      if (!in) throw InputError("cannot open '" + recon_seq + "'");
      const CadSequence seq = read_cad_text(in);
      const auto result = reconstruct(seq);
      if (!result.ok()) {
        std::cout << "invalid: " << to_string(result.invalid->kind) << ": " << result.invalid->detail << '\n';
        return 2;
      }
      std::cout << "valid: " << result.solid->bodies.size() << " bodies\n";
      if (!recon_points.empty()) {
        const auto cloud = sample_shape(*result.solid, recon_samples, seed_override(recon_seed));
        auto out = open_out(recon_points);
        write_point_cloud(out, cloud);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
