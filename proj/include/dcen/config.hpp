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

#ifndef DCEN_CONFIG_HPP_
#define DCEN_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcen/data_model.hpp"
#include "dcen/trainer.hpp"

// JSON config files. A train config has the sections
//   {"train": {...}, "arch": {...}, "augmentation": {...}}
// and a synth config the single section {"synth": {...}}. Absent fields keep
// their defaults. The augmentation section is either an explicit op list
//   {"out_size": N, "ops": [{"name": ..., "prob": ..., ...}, ...]}
// or a named/indexed preset {"out_size": N, "preset": "crop_flip_blur"}.

namespace dcen {

nlohmann::json augmentation_spec_to_json(const AugmentationSpec& spec);
AugmentationSpec augmentation_spec_from_json(const nlohmann::json& j);

nlohmann::json arch_config_to_json(const ArchConfig& arch);
ArchConfig arch_config_from_json(const nlohmann::json& j);

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& root);

nlohmann::json synth_config_to_json(const SynthConfig& cfg);
SynthConfig synth_config_from_json(const nlohmann::json& root);

/// Parses a file into JSON; ParseError on malformed input.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Applies one "dotted.path=value" override; the value is parsed as a JSON
/// literal and falls back to a string. Paths are created when absent.
void apply_override(nlohmann::json& root, const std::string& assignment);

}  // namespace dcen

#endif  // DCEN_CONFIG_HPP_
