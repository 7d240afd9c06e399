// Copyright (c) 2026 the dcen authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcen/checkpoint.hpp"
#include "dcen/config.hpp"
#include "dcen/dataset_io.hpp"
#include "dcen/evaluator.hpp"
#include "dcen/sweep.hpp"
#include "dcen/synthetic.hpp"
#include "dcen/trainer.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string config;
  std::string data;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

nlohmann::json load_config_with_overrides(const CommonOpts& opts) {
  nlohmann::json root =
      opts.config.empty() ? nlohmann::json::object() : dcen::load_json_file(opts.config);
  for (const std::string& o : opts.overrides) dcen::apply_override(root, o);
  return root;
}

int worker_count_from_env() {
  const char* env = std::getenv("DCEN_WORKERS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

void write_reports(const dcen::GZSLReport& rep, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_text(out_dir / "report.json", dcen::report_json(rep));
  write_text(out_dir / "report.txt", dcen::report_table(rep));
}

int cmd_synth(const CommonOpts& opts) {
  nlohmann::json root = load_config_with_overrides(opts);
  dcen::SynthConfig cfg = dcen::synth_config_from_json(root);
  if (opts.seed) cfg.seed = *opts.seed;
  const dcen::GZSLDataset ds = dcen::generate_synthetic(cfg);
  const dcen::ValidationReport rep = dcen::validate_dataset(ds);
  if (!rep.ok) {
    for (const std::string& s : rep.issues) std::cerr << "  " << s << "\n";
    throw std::runtime_error("generated dataset fails validation");
  }
  dcen::save_dataset(ds, opts.out);
  std::cout << "wrote " << ds.num_samples() << " samples, "
            << ds.attributes.num_classes() << " classes ("
            << ds.seen_classes.size() << " seen / " << ds.unseen_classes.size()
            << " unseen) to " << opts.out << "\n";
  return 0;
}

int cmd_train(const CommonOpts& opts, const std::string& resume) {
  nlohmann::json root = load_config_with_overrides(opts);
  dcen::TrainConfig cfg = dcen::train_config_from_json(root);
  if (opts.seed) cfg.seed = *opts.seed;
  const dcen::GZSLDataset ds = dcen::load_dataset_dir(opts.data);

  std::optional<fs::path> resume_path;
  if (!resume.empty()) resume_path = fs::path(resume);
  dcen::TrainState state = dcen::train(ds, cfg, opts.out, resume_path);

  const dcen::GZSLReport rep = dcen::evaluate_gzsl(state.encoders, ds);
  write_reports(rep, opts.out);
  std::cout << dcen::report_table(rep);
  return 0;
}

int cmd_eval(const std::string& checkpoint, const CommonOpts& opts) {
  dcen::TrainState state = dcen::load_checkpoint(checkpoint);
  const dcen::GZSLDataset ds = dcen::load_dataset_dir(opts.data);
  if (state.encoders.arch.attr_dim != ds.attributes.attr_dim())
    throw std::runtime_error("checkpoint attr_dim " +
                             std::to_string(state.encoders.arch.attr_dim) +
                             " does not match dataset attr_dim " +
                             std::to_string(ds.attributes.attr_dim()));
  const dcen::GZSLReport rep = dcen::evaluate_gzsl(state.encoders, ds);
  write_reports(rep, opts.out);
  std::cout << dcen::report_table(rep);
  return 0;
}

int cmd_sweep(const CommonOpts& opts) {
  nlohmann::json root = load_config_with_overrides(opts);
  if (!root.contains("sweep")) throw dcen::ParseError("sweep config: missing 'sweep' section");
  const nlohmann::json& s = root.at("sweep");

  dcen::SweepSpec spec;
  spec.param = s.at("param").get<std::string>();
  spec.values = s.at("values").get<std::vector<double>>();
  if (s.contains("repeats")) spec.repeats = s.at("repeats").get<int>();

  fs::path base_path = s.at("base_config").get<std::string>();
  if (base_path.is_relative() && !opts.config.empty())
    base_path = fs::path(opts.config).parent_path() / base_path;
  spec.base = dcen::train_config_from_json(dcen::load_json_file(base_path));
  if (opts.seed) spec.base.seed = *opts.seed;

  const dcen::GZSLDataset ds = dcen::load_dataset_dir(opts.data);
  const auto cells = dcen::run_sweep(spec, ds, opts.out, worker_count_from_env());
  std::cout << "sweep complete: " << cells.size() << " cells, results in " << opts.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized zero-shot learning with dual contrastive embeddings"};
  app.require_subcommand(1);

  CommonOpts synth_opts, train_opts, eval_opts, sweep_opts;
  std::string resume, checkpoint;

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--config", synth_opts.config, "synth config JSON");
  synth->add_option("--out", synth_opts.out, "output dataset directory")->required();
  synth->add_option("--set", synth_opts.overrides, "dotted-path config override key=value");
  synth->add_option("--seed", synth_opts.seed, "override the config seed");

  CLI::App* train = app.add_subcommand("train", "train on a dataset directory");
  train->add_option("--config", train_opts.config, "train config JSON");
  train->add_option("--data", train_opts.data, "dataset directory")->required();
  train->add_option("--out", train_opts.out, "run output directory")->required();
  train->add_option("--set", train_opts.overrides, "dotted-path config override key=value");
  train->add_option("--seed", train_opts.seed, "override the config seed");
  train->add_option("--resume", resume, "checkpoint to resume from");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "checkpoint archive")->required();
  eval->add_option("--data", eval_opts.data, "dataset directory")->required();
  eval->add_option("--out", eval_opts.out, "report output directory")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "run a hyper-parameter sweep");
  sweep->add_option("--config", sweep_opts.config, "sweep spec JSON")->required();
  sweep->add_option("--data", sweep_opts.data, "dataset directory")->required();
  sweep->add_option("--out", sweep_opts.out, "sweep output directory")->required();
  sweep->add_option("--set", sweep_opts.overrides, "dotted-path config override key=value");
  sweep->add_option("--seed", sweep_opts.seed, "override the base config seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_opts);
    if (train->parsed()) return cmd_train(train_opts, resume);
    if (eval->parsed()) return cmd_eval(checkpoint, eval_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
