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

#ifndef DCEN_SWEEP_HPP_
#define DCEN_SWEEP_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "dcen/evaluator.hpp"
#include "dcen/trainer.hpp"

namespace dcen {

/// One swept hyper-parameter, the values to try, and repeats per value.
/// augmentation_row values index the augmentation presets.
struct SweepSpec {
  std::string param;  // lambda1 | lambda2 | sigma | K | augmentation_row
  std::vector<double> values;
  int repeats = 1;
  TrainConfig base;
};

void validate_sweep_spec(const SweepSpec& spec);

/// Deterministic per-cell seed derived from (base seed, param, value, repeat)
/// so any cell can be reproduced in isolation.
std::uint64_t sweep_cell_seed(std::uint64_t base_seed, const std::string& param, double value,
                              int repeat);

/// The base config with one cell's value and seed applied.
TrainConfig sweep_cell_config(const SweepSpec& spec, double value, int repeat);

struct SweepCell {
  double value = 0.0;
  int repeat = 0;
  GZSLReport report;
};

/// Trains and evaluates every (value, repeat) cell. Rows are appended to
/// out_dir/sweep.csv in canonical order as soon as every earlier cell has
/// finished, and a mean-H line plot is written to out_dir/sweep_h.svg.
/// workers > 1 runs cells in parallel threads without changing any output.
std::vector<SweepCell> run_sweep(const SweepSpec& spec, const GZSLDataset& ds,
                                 const std::filesystem::path& out_dir, int workers = 1);

}  // namespace dcen

#endif  // DCEN_SWEEP_HPP_
