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

#include "dcen/config.hpp"

#include <fstream>

namespace dcen {

using nlohmann::json;

namespace {

template <typename T>
void read_field(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

}  // namespace

json augmentation_spec_to_json(const AugmentationSpec& spec) {
  json j;
  j["out_size"] = spec.out_size;
  json ops = json::array();
  for (const AugOp& op : spec.ops) {
    json o;
    o["name"] = op.name;
    o["prob"] = op.prob;
    if (op.name == "crop") {
      o["scale_lo"] = op.scale_lo;
      o["scale_hi"] = op.scale_hi;
    } else if (op.name == "blur") {
      o["sigma_lo"] = op.sigma_lo;
      o["sigma_hi"] = op.sigma_hi;
    } else if (op.name == "rotation") {
      o["max_angle_deg"] = op.max_angle_deg;
    } else if (op.name == "swap") {
      o["grid_n"] = op.grid_n;
    } else if (op.name == "color_jitter") {
      o["brightness"] = op.brightness;
      o["contrast"] = op.contrast;
      o["saturation"] = op.saturation;
      o["hue"] = op.hue;
    }
    ops.push_back(o);
  }
  j["ops"] = ops;
  return j;
}

AugmentationSpec augmentation_spec_from_json(const json& j) {
  AugmentationSpec spec;
  read_field(j, "out_size", &spec.out_size);
  if (j.contains("preset")) {
    if (j.contains("ops"))
      throw ParseError("augmentation: give either 'preset' or 'ops', not both");
    int row = -1;
    if (j.at("preset").is_number_integer()) {
      row = j.at("preset").get<int>();
    } else {
      const std::string name = j.at("preset").get<std::string>();
      for (int r = 0; r < augmentation_preset_count(); ++r)
        if (augmentation_preset_name(r) == name) row = r;
      if (row < 0) throw ParseError("augmentation: unknown preset '" + name + "'");
    }
    AugmentationSpec preset = augmentation_preset(row, spec.out_size);
    spec.ops = std::move(preset.ops);
  } else if (j.contains("ops")) {
    spec.ops.clear();
    for (const json& o : j.at("ops")) {
      AugOp op;
      op.name = o.at("name").get<std::string>();
      read_field(o, "prob", &op.prob);
      read_field(o, "scale_lo", &op.scale_lo);
      read_field(o, "scale_hi", &op.scale_hi);
      read_field(o, "sigma_lo", &op.sigma_lo);
      read_field(o, "sigma_hi", &op.sigma_hi);
      read_field(o, "max_angle_deg", &op.max_angle_deg);
      read_field(o, "grid_n", &op.grid_n);
      read_field(o, "brightness", &op.brightness);
      read_field(o, "contrast", &op.contrast);
      read_field(o, "saturation", &op.saturation);
      read_field(o, "hue", &op.hue);
      spec.ops.push_back(op);
    }
  }
  validate_augmentation_spec(spec);
  return spec;
}

json arch_config_to_json(const ArchConfig& arch) {
  json j;
  j["backbone"] = arch.backbone;
  j["image_size"] = arch.image_size;
  j["image_channels"] = arch.image_channels;
  j["feature_dim"] = arch.feature_dim;
  j["embed_dim"] = arch.embed_dim;
  j["attr_dim"] = arch.attr_dim;
  j["K"] = arch.depth_k;
  j["conv_widths"] = arch.conv_widths;
  j["head_pool"] = arch.head_pool;
  j["mlp_hidden"] = arch.mlp_hidden;
  j["bn_momentum"] = arch.bn_momentum;
  j["decoder_on_unit"] = arch.decoder_on_unit;
  return j;
}

ArchConfig arch_config_from_json(const json& j) {
  ArchConfig arch;
  read_field(j, "backbone", &arch.backbone);
  read_field(j, "image_size", &arch.image_size);
  read_field(j, "image_channels", &arch.image_channels);
  read_field(j, "feature_dim", &arch.feature_dim);
  read_field(j, "embed_dim", &arch.embed_dim);
  read_field(j, "attr_dim", &arch.attr_dim);
  read_field(j, "K", &arch.depth_k);
  if (j.contains("conv_widths")) arch.conv_widths = j.at("conv_widths").get<std::vector<Index>>();
  read_field(j, "head_pool", &arch.head_pool);
  read_field(j, "mlp_hidden", &arch.mlp_hidden);
  read_field(j, "bn_momentum", &arch.bn_momentum);
  read_field(j, "decoder_on_unit", &arch.decoder_on_unit);
  return arch;
}

json train_config_to_json(const TrainConfig& cfg) {
  json t;
  t["mode"] = train_mode_name(cfg.mode);
  t["lambda1"] = cfg.lambda1;
  t["lambda2"] = cfg.lambda2;
  t["tau"] = cfg.tau;
  t["momentum"] = cfg.momentum;
  t["sigma_pct"] = cfg.sigma_pct;
  t["choose_p"] = cfg.choose_p;
  t["batch_size"] = cfg.batch_size;
  t["steps"] = cfg.steps;
  t["learning_rate"] = cfg.learning_rate;
  t["weight_decay"] = cfg.weight_decay;
  t["sgd_momentum"] = cfg.sgd_momentum;
  t["cosine_decay"] = cfg.cosine_decay;
  t["seed"] = cfg.seed;
  t["queue_capacity"] = cfg.queue_capacity;
  t["eval_every"] = cfg.eval_every;
  t["triplet_hinge"] = cfg.triplet_hinge;
  t["triplet_margin"] = cfg.triplet_margin;
  t["disable_vcm_forward"] = cfg.disable_vcm_forward;

  json root;
  root["train"] = t;
  root["arch"] = arch_config_to_json(cfg.arch);
  root["augmentation"] = augmentation_spec_to_json(cfg.augmentation);
  return root;
}

TrainConfig train_config_from_json(const json& root) {
  TrainConfig cfg;
  if (root.contains("train")) {
    const json& t = root.at("train");
    if (t.contains("mode")) {
      const std::string name = t.at("mode").get<std::string>();
      if (!train_mode_from_name(name, &cfg.mode))
        throw ParseError("train config: unknown mode '" + name + "'");
    }
    read_field(t, "lambda1", &cfg.lambda1);
    read_field(t, "lambda2", &cfg.lambda2);
    read_field(t, "tau", &cfg.tau);
    read_field(t, "momentum", &cfg.momentum);
    read_field(t, "sigma_pct", &cfg.sigma_pct);
    read_field(t, "choose_p", &cfg.choose_p);
    read_field(t, "batch_size", &cfg.batch_size);
    read_field(t, "steps", &cfg.steps);
    read_field(t, "learning_rate", &cfg.learning_rate);
    read_field(t, "weight_decay", &cfg.weight_decay);
    read_field(t, "sgd_momentum", &cfg.sgd_momentum);
    read_field(t, "cosine_decay", &cfg.cosine_decay);
    read_field(t, "seed", &cfg.seed);
    read_field(t, "queue_capacity", &cfg.queue_capacity);
    read_field(t, "eval_every", &cfg.eval_every);
    read_field(t, "triplet_hinge", &cfg.triplet_hinge);
    read_field(t, "triplet_margin", &cfg.triplet_margin);
    read_field(t, "disable_vcm_forward", &cfg.disable_vcm_forward);
  }
  if (root.contains("arch")) cfg.arch = arch_config_from_json(root.at("arch"));
  if (root.contains("augmentation")) {
    cfg.augmentation = augmentation_spec_from_json(root.at("augmentation"));
  } else {
    cfg.augmentation = default_augmentation_spec(cfg.arch.image_size);
  }
  return cfg;
}

json synth_config_to_json(const SynthConfig& cfg) {
  json s;
  s["num_seen"] = cfg.num_seen;
  s["num_unseen"] = cfg.num_unseen;
  s["attr_dim"] = cfg.attr_dim;
  s["samples_per_class"] = cfg.samples_per_class;
  s["image_size"] = cfg.image_size;
  s["noise_std"] = cfg.noise_std;
  s["seed"] = cfg.seed;
  json root;
  root["synth"] = s;
  return root;
}

SynthConfig synth_config_from_json(const json& root) {
  SynthConfig cfg;
  if (root.contains("synth")) {
    const json& s = root.at("synth");
    read_field(s, "num_seen", &cfg.num_seen);
    read_field(s, "num_unseen", &cfg.num_unseen);
    read_field(s, "attr_dim", &cfg.attr_dim);
    read_field(s, "samples_per_class", &cfg.samples_per_class);
    read_field(s, "image_size", &cfg.image_size);
    read_field(s, "noise_std", &cfg.noise_std);
    read_field(s, "seed", &cfg.seed);
  }
  return cfg;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open config file " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
}

void apply_override(json& root, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ParseError("override must look like dotted.path=value, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &root;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ParseError("override path has an empty segment: '" + path + "'");
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace dcen
