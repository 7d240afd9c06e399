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

#ifndef DCEN_CHECKPOINT_HPP_
#define DCEN_CHECKPOINT_HPP_

#include <filesystem>

#include "dcen/trainer.hpp"

namespace dcen {

// Checkpoint archive, version 1:
//   magic "DCENCKPT" | u32 version | u32 json_len | json header
//   | f32 sections in the order listed by the header.
// The header echoes the architecture and train config, the step counter, the
// rng state, and the queue geometry. Identical states serialize to identical
// bytes.

/// Writes the full training state (parameters, BN statistics, optimizer
/// velocities, queue contents, rng state, step counter).
void save_checkpoint(const TrainState& state, const TrainConfig& cfg,
                     const std::filesystem::path& path);

/// Restores a training state; the embedded config echo is returned through
/// cfg_out when non-null. Throws ParseError on a bad magic, version, or
/// truncated archive.
TrainState load_checkpoint(const std::filesystem::path& path, TrainConfig* cfg_out = nullptr);

}  // namespace dcen

#endif  // DCEN_CHECKPOINT_HPP_
