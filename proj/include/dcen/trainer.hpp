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

#ifndef DCEN_TRAINER_HPP_
#define DCEN_TRAINER_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dcen/augmentation.hpp"
#include "dcen/data_model.hpp"
#include "dcen/encoders.hpp"
#include "dcen/losses.hpp"

namespace dcen {

/// Which loss terms are active.
///   basic_zsl  alignment of f with the class embeddings only
///   scm_only   masked attributes, cross-modal triplet, attribute prediction
///   vcm_only   alignment plus instance discrimination
///   full_dcen  everything
enum class TrainMode { kBasicZsl, kScmOnly, kVcmOnly, kFullDcen };

const char* train_mode_name(TrainMode mode);
bool train_mode_from_name(const std::string& name, TrainMode* out);

struct TrainConfig {
  TrainMode mode = TrainMode::kFullDcen;
  double lambda1 = 0.1;   // instance-discrimination weight
  double lambda2 = 0.1;   // attribute-prediction weight
  double tau = 0.07;      // InfoNCE temperature
  double momentum = 0.999;  // key-encoder momentum m
  double sigma_pct = 25.0;  // share of attribute entries masked per chosen row
  double choose_p = 0.5;    // probability a row is chosen for masking
  Index batch_size = 32;
  Index steps = 500;
  double learning_rate = 0.05;
  double weight_decay = 0.0;
  double sgd_momentum = 0.9;
  bool cosine_decay = true;
  std::uint64_t seed = 7;
  Index queue_capacity = 1024;
  Index eval_every = 100;
  bool triplet_hinge = false;
  double triplet_margin = 0.0;
  // Skips the key-encoder forward, the loss value, and the enqueue; only
  // legal when no gradient would flow from the term (lambda1 == 0 or a mode
  // without it). Exists so runs can demonstrate the forward pass does not
  // perturb training.
  bool disable_vcm_forward = false;
  AugmentationSpec augmentation = default_augmentation_spec();
  ArchConfig arch;
};

/// Throws std::invalid_argument naming the violated constraint. Checks the
/// config against the dataset (dims, feature-mode restrictions, batch size).
void validate_train_config(const TrainConfig& cfg, const GZSLDataset& ds);

struct TrainState {
  EncoderSet<float> encoders;
  NegativeQueue<float> queue;
  VecXf vel_visual, vel_semantic, vel_decoder;  // SGD momentum buffers
  Index step = 0;
  Rng rng;  // drives batch sampling, augmentation, and masking
};

TrainState make_train_state(const TrainConfig& cfg);

/// One optimization step over a raw (un-augmented) batch:
/// two views -> f on view1 / g on view2 -> masked class attributes -> h ->
/// losses -> one SGD step on the active networks -> momentum update ->
/// enqueue keys. Throws on non-finite loss with a diagnostic message.
LossBundle train_step(TrainState& state, const MatXf& batch, const std::vector<int>& labels,
                      const AttributeMatrix& seen_attributes, const TrainConfig& cfg);

/// Full run: cfg.steps steps over per-step sampled batches, periodic val
/// evaluation plus checkpointing every cfg.eval_every steps and at the end.
/// Writes metrics.csv (step,l_sa,l_sp,l_id,l_total,pos_sim_mean,queue_length),
/// eval.csv (step,val_mca) and checkpoint files under out_dir. When
/// resume_from is given, training continues from that checkpoint and the
/// final state is identical to an uninterrupted run.
TrainState train(const GZSLDataset& ds, const TrainConfig& cfg,
                 const std::filesystem::path& out_dir,
                 const std::optional<std::filesystem::path>& resume_from = std::nullopt);

}  // namespace dcen

#endif  // DCEN_TRAINER_HPP_
