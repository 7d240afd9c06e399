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

#include "dcen/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dcen/checkpoint.hpp"
#include "dcen/evaluator.hpp"

namespace dcen {

namespace fs = std::filesystem;

const char* train_mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::kBasicZsl: return "basic_zsl";
    case TrainMode::kScmOnly: return "scm_only";
    case TrainMode::kVcmOnly: return "vcm_only";
    case TrainMode::kFullDcen: return "full_dcen";
  }
  return "?";
}

bool train_mode_from_name(const std::string& name, TrainMode* out) {
  if (name == "basic_zsl") *out = TrainMode::kBasicZsl;
  else if (name == "scm_only") *out = TrainMode::kScmOnly;
  else if (name == "vcm_only") *out = TrainMode::kVcmOnly;
  else if (name == "full_dcen") *out = TrainMode::kFullDcen;
  else return false;
  return true;
}

namespace {

bool mode_uses_scm(TrainMode m) {
  return m == TrainMode::kScmOnly || m == TrainMode::kFullDcen;
}
bool mode_uses_vcm(TrainMode m) {
  return m == TrainMode::kVcmOnly || m == TrainMode::kFullDcen;
}

double step_learning_rate(const TrainConfig& cfg, Index step) {
  if (!cfg.cosine_decay || cfg.steps <= 0) return cfg.learning_rate;
  const double t = static_cast<double>(step) / static_cast<double>(cfg.steps);
  return cfg.learning_rate * 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

void sgd_update(VecXf& params, VecXf& vel, const VecXf& grad, float lr, float mu, float wd) {
  if (wd != 0.0f) vel = mu * vel + grad + wd * params;
  else vel = mu * vel + grad;
  params -= lr * vel;
}

/// Selects the attribute rows of the seen classes, sorted by class id.
AttributeMatrix seen_attribute_matrix(const GZSLDataset& ds) {
  AttributeMatrix seen;
  seen.class_ids = ds.seen_classes;  // already sorted
  seen.values.resize(static_cast<Index>(seen.class_ids.size()), ds.attributes.attr_dim());
  for (std::size_t i = 0; i < seen.class_ids.size(); ++i) {
    const Index row = ds.attributes.row_of(seen.class_ids[i]);
    seen.values.row(static_cast<Index>(i)) = ds.attributes.values.row(row);
  }
  return seen;
}

}  // namespace

void validate_train_config(const TrainConfig& cfg, const GZSLDataset& ds) {
  if (cfg.lambda1 < 0.0 || cfg.lambda2 < 0.0)
    throw std::invalid_argument("train config: loss weights must be >= 0");
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("train config: tau must be > 0");
  if (cfg.momentum < 0.0 || cfg.momentum > 1.0)
    throw std::invalid_argument("train config: momentum must lie in [0,1]");
  if (cfg.sigma_pct < 0.0 || cfg.sigma_pct > 100.0)
    throw std::invalid_argument("train config: sigma_pct outside [0,100]");
  if (cfg.choose_p < 0.0 || cfg.choose_p > 1.0)
    throw std::invalid_argument("train config: choose_p outside [0,1]");
  if (cfg.batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
  if (cfg.steps < 0) throw std::invalid_argument("train config: steps must be >= 0");
  if (cfg.queue_capacity < 1)
    throw std::invalid_argument("train config: queue_capacity must be >= 1");
  if (cfg.eval_every < 1) throw std::invalid_argument("train config: eval_every must be >= 1");
  if (!(cfg.learning_rate > 0.0))
    throw std::invalid_argument("train config: learning_rate must be > 0");
  if (cfg.weight_decay < 0.0)
    throw std::invalid_argument("train config: weight_decay must be >= 0");
  if (cfg.sgd_momentum < 0.0 || cfg.sgd_momentum >= 1.0)
    throw std::invalid_argument("train config: sgd_momentum must lie in [0,1)");
  validate_arch_config(cfg.arch);
  validate_augmentation_spec(cfg.augmentation);

  if (cfg.arch.attr_dim != ds.attributes.attr_dim())
    throw std::invalid_argument("train config: arch.attr_dim " + std::to_string(cfg.arch.attr_dim) +
                                " does not match dataset attr_dim " +
                                std::to_string(ds.attributes.attr_dim()));
  if (ds.image_mode()) {
    if (cfg.arch.backbone != "small_conv")
      throw std::invalid_argument("train config: image datasets require the small_conv backbone");
    if (ds.shape.dims[2] != cfg.arch.image_channels)
      throw std::invalid_argument("train config: dataset channels do not match arch");
    if (cfg.augmentation.out_size != cfg.arch.image_size)
      throw std::invalid_argument("train config: augmentation out_size must equal arch image_size");
  } else {
    if (cfg.arch.backbone != "mlp_on_features")
      throw std::invalid_argument("train config: feature datasets require the mlp_on_features backbone");
    if (cfg.arch.feature_dim != ds.shape.dims[0])
      throw std::invalid_argument("train config: arch.feature_dim does not match dataset width");
    // Without images there are no views, keys, or queue entries.
    if (mode_uses_vcm(cfg.mode))
      throw std::invalid_argument(
          "train config: instance discrimination needs images; use basic_zsl or scm_only "
          "in feature mode");
  }
  if (cfg.disable_vcm_forward && mode_uses_vcm(cfg.mode) && cfg.lambda1 != 0.0)
    throw std::invalid_argument(
        "train config: disable_vcm_forward requires lambda1 == 0 (the term would need its "
        "forward pass)");

  const Index n_train = static_cast<Index>(ds.indices_of(SplitTag::kTrain).size());
  if (cfg.steps > 0 && n_train < cfg.batch_size)
    throw std::invalid_argument("train config: train split smaller than one batch (" +
                                std::to_string(n_train) + " < " +
                                std::to_string(cfg.batch_size) + ")");
}

TrainState make_train_state(const TrainConfig& cfg) {
  TrainState state;
  state.rng = Rng(cfg.seed);
  const std::uint64_t init_seed = state.rng.next_u64();
  state.encoders = init_encoders<float>(cfg.arch, init_seed);
  state.queue = NegativeQueue<float>(cfg.queue_capacity, cfg.arch.embed_dim);
  state.vel_visual = VecXf::Zero(state.encoders.visual.params_.size());
  state.vel_semantic = VecXf::Zero(state.encoders.semantic.params_.size());
  state.vel_decoder = VecXf::Zero(state.encoders.decoder.params_.size());
  state.step = 0;
  return state;
}

LossBundle train_step(TrainState& state, const MatXf& batch, const std::vector<int>& labels,
                      const AttributeMatrix& seen_attributes, const TrainConfig& cfg) {
  const Index b = batch.rows();
  if (static_cast<Index>(labels.size()) != b)
    throw std::invalid_argument("train_step: labels do not match batch");

  const bool image_mode = state.encoders.arch.backbone == "small_conv";
  const bool scm = mode_uses_scm(cfg.mode);
  const bool vcm = mode_uses_vcm(cfg.mode) && image_mode && !cfg.disable_vcm_forward;
  const Index embed = cfg.arch.embed_dim;

  // (1) two augmented views per image, independent draws.
  MatXf x1, x2;
  if (image_mode) {
    const Index h = cfg.arch.image_size;
    x1.resize(b, h * h * cfg.arch.image_channels);
    x2.resize(b, h * h * cfg.arch.image_channels);
    for (Index i = 0; i < b; ++i) {
      const Image img = unflatten_hwc(batch.row(i).transpose(), h, h, cfg.arch.image_channels);
      auto [v1, v2] = two_views(img, cfg.augmentation, state.rng);
      x1.row(i) = flatten_hwc(v1).transpose();
      x2.row(i) = flatten_hwc(v2).transpose();
    }
  } else {
    x1 = batch;
  }

  // (2) query encoder on view1 (with gradient), key encoder on view2 (none).
  typename VisualNet<float>::Cache f_cache;
  const ForwardOutput<float> f_out =
      visual_forward(state.encoders.visual, x1, nn::Mode::kTrain, /*update_stats=*/true, &f_cache);
  ForwardOutput<float> g_out;
  if (vcm)
    g_out = visual_forward(state.encoders.momentum, x2, nn::Mode::kTrain, /*update_stats=*/false);

  // (3) one masking draw over the whole seen-class matrix per step.
  const double sigma = scm ? cfg.sigma_pct : 0.0;
  const double choose_p = scm ? cfg.choose_p : 0.0;
  const MaskResult<float> mask =
      mask_attributes(seen_attributes.values, sigma, choose_p, state.rng);

  // (4) semantic embeddings of every seen class.
  typename SemanticNet<float>::Cache h_cache;
  const ForwardOutput<float> h_out = semantic_forward(
      state.encoders.semantic, mask.masked_attrs, nn::Mode::kTrain, /*update_stats=*/true, &h_cache);

  std::vector<Index> label_rows(static_cast<std::size_t>(b));
  for (Index i = 0; i < b; ++i) {
    const Index row = seen_attributes.row_of(labels[static_cast<std::size_t>(i)]);
    if (row < 0)
      throw std::invalid_argument("train_step: label " +
                                  std::to_string(labels[static_cast<std::size_t>(i)]) +
                                  " is not a seen class");
    label_rows[static_cast<std::size_t>(i)] = row;
  }

  // (5) loss terms and gradients w.r.t. the embeddings.
  LossBundle bundle;
  MatXf d_f_unit = MatXf::Zero(b, embed);
  MatXf d_h_unit = MatXf::Zero(h_out.unit.rows(), embed);
  MatXf d_f_raw_extra = MatXf::Zero(b, embed);
  MatXf d_h_raw_extra = MatXf::Zero(h_out.raw.rows(), embed);

  if (scm) {
    const AlignmentResult<float> align = semantic_alignment_loss(
        f_out.unit, labels, h_out.unit, seen_attributes.class_ids, cfg.triplet_hinge,
        static_cast<float>(cfg.triplet_margin));
    bundle.l_sa = static_cast<double>(align.loss);
    bundle.pos_sim_mean = static_cast<double>(align.pos_sim_mean);
    bundle.hardest_negative_ids = align.hardest_ids;
    semantic_alignment_backward(f_out.unit, h_out.unit, align, 1.0f, &d_f_unit, &d_h_unit);
  } else {
    MatXf targets(b, embed);
    for (Index i = 0; i < b; ++i)
      targets.row(i) = h_out.unit.row(label_rows[static_cast<std::size_t>(i)]);
    const float l_align = zsl_loss(f_out.unit, targets);
    bundle.l_sa = static_cast<double>(l_align);
    bundle.pos_sim_mean = static_cast<double>(-l_align);
    const float f = -1.0f / static_cast<float>(b);
    for (Index i = 0; i < b; ++i) {
      d_f_unit.row(i) += f * targets.row(i);
      d_h_unit.row(label_rows[static_cast<std::size_t>(i)]) += f * f_out.unit.row(i);
    }
  }

  VecXf grad_decoder;
  typename DecoderNet<float>::Cache d_cache;
  if (scm) {
    const bool on_unit = cfg.arch.decoder_on_unit;
    MatXf sem_in(b, embed);
    for (Index i = 0; i < b; ++i)
      sem_in.row(i) = (on_unit ? h_out.unit : h_out.raw).row(label_rows[static_cast<std::size_t>(i)]);
    const MatXf& vis_in = on_unit ? f_out.unit : f_out.raw;

    const MatXf pred = decoder_forward(state.encoders.decoder, vis_in, sem_in, nn::Mode::kTrain,
                                       /*update_stats=*/true, &d_cache);
    MatXf true_attrs(b, seen_attributes.attr_dim());
    for (Index i = 0; i < b; ++i)
      true_attrs.row(i) = seen_attributes.values.row(label_rows[static_cast<std::size_t>(i)]);
    bundle.l_sp = static_cast<double>(attribute_prediction_loss(pred, true_attrs));

    if (cfg.lambda2 > 0.0) {
      const MatXf d_pred =
          attribute_prediction_backward(pred, true_attrs, static_cast<float>(cfg.lambda2));
      grad_decoder = VecXf::Zero(state.encoders.decoder.params_.size());
      MatXf d_vis_in, d_sem_in;
      state.encoders.decoder.backward(d_cache, d_pred, grad_decoder, &d_vis_in, &d_sem_in);
      if (on_unit) {
        d_f_unit += d_vis_in;
        for (Index i = 0; i < b; ++i)
          d_h_unit.row(label_rows[static_cast<std::size_t>(i)]) += d_sem_in.row(i);
      } else {
        d_f_raw_extra += d_vis_in;
        for (Index i = 0; i < b; ++i)
          d_h_raw_extra.row(label_rows[static_cast<std::size_t>(i)]) += d_sem_in.row(i);
      }
    }
  }

  if (vcm) {
    bundle.l_id = static_cast<double>(instance_discrimination_loss(
        f_out.unit, g_out.unit, state.queue, static_cast<float>(cfg.tau)));
    if (cfg.lambda1 > 0.0)
      d_f_unit += instance_discrimination_backward(f_out.unit, g_out.unit, state.queue,
                                                   static_cast<float>(cfg.tau),
                                                   static_cast<float>(cfg.lambda1));
  }

  bundle.l_total = cfg.lambda1 * bundle.l_id + bundle.l_sa + cfg.lambda2 * bundle.l_sp;
  if (!std::isfinite(bundle.l_total)) {
    std::ostringstream os;
    os << "train_step: non-finite loss at step " << state.step << " (l_sa=" << bundle.l_sa
       << " l_sp=" << bundle.l_sp << " l_id=" << bundle.l_id << ")";
    throw std::runtime_error(os.str());
  }

  // (6) backprop into the active networks and take one SGD step.
  MatXf d_f_raw = l2_normalize_rows_backward(f_out.raw, f_out.unit, d_f_unit);
  d_f_raw += d_f_raw_extra;
  MatXf d_h_raw = l2_normalize_rows_backward(h_out.raw, h_out.unit, d_h_unit);
  d_h_raw += d_h_raw_extra;

  VecXf grad_visual = VecXf::Zero(state.encoders.visual.params_.size());
  state.encoders.visual.backward(f_cache, d_f_raw, grad_visual);
  VecXf grad_semantic = VecXf::Zero(state.encoders.semantic.params_.size());
  state.encoders.semantic.backward(h_cache, d_h_raw, grad_semantic);

  const float lr = static_cast<float>(step_learning_rate(cfg, state.step));
  const float mu = static_cast<float>(cfg.sgd_momentum);
  const float wd = static_cast<float>(cfg.weight_decay);
  sgd_update(state.encoders.visual.params_, state.vel_visual, grad_visual, lr, mu, wd);
  sgd_update(state.encoders.semantic.params_, state.vel_semantic, grad_semantic, lr, mu, wd);
  if (grad_decoder.size() > 0)
    sgd_update(state.encoders.decoder.params_, state.vel_decoder, grad_decoder, lr, mu, wd);

  // (7) momentum blend of the key encoder, (8) enqueue this step's keys.
  momentum_update(state.encoders, static_cast<float>(cfg.momentum));
  if (vcm) enqueue(state.queue, g_out.unit);

  bundle.queue_length = state.queue.length;
  ++state.step;
  return bundle;
}

namespace {

/// Class-balanced accuracy of the val split, predictions over the union
/// label space. Returns -1 when the val split is empty.
double val_mca(TrainState& state, const GZSLDataset& ds) {
  const std::vector<Index> idx = ds.indices_of(SplitTag::kVal);
  if (idx.empty()) return -1.0;
  MatXf x(static_cast<Index>(idx.size()), ds.samples.cols());
  std::vector<int> y(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    x.row(static_cast<Index>(i)) = ds.samples.row(idx[i]);
    y[i] = ds.labels[static_cast<std::size_t>(idx[i])];
  }
  const std::vector<int> preds = predict(state.encoders, ds.attributes, x);
  return mean_class_accuracy(preds, y, ds.seen_classes);
}

std::string checkpoint_name(Index step) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "checkpoint_step_%06lld.bin", static_cast<long long>(step));
  return buf;
}

}  // namespace

TrainState train(const GZSLDataset& ds, const TrainConfig& cfg, const fs::path& out_dir,
                 const std::optional<fs::path>& resume_from) {
  {
    const ValidationReport rep = validate_dataset(ds);
    if (!rep.ok) {
      std::ostringstream os;
      os << "train: dataset fails validation:";
      for (const std::string& s : rep.issues) os << "\n  " << s;
      throw std::invalid_argument(os.str());
    }
  }
  validate_train_config(cfg, ds);
  fs::create_directories(out_dir);

  TrainState state = resume_from ? load_checkpoint(*resume_from) : make_train_state(cfg);

  const AttributeMatrix seen_attrs = seen_attribute_matrix(ds);
  const std::vector<Index> train_idx = ds.indices_of(SplitTag::kTrain);

  const bool fresh = !resume_from;
  std::ofstream metrics(out_dir / "metrics.csv",
                        fresh ? std::ios::out : std::ios::out | std::ios::app);
  if (!metrics) throw std::runtime_error("train: cannot write metrics.csv");
  if (fresh) metrics << "step,l_sa,l_sp,l_id,l_total,pos_sim_mean,queue_length\n";
  std::ofstream eval_log(out_dir / "eval.csv",
                         fresh ? std::ios::out : std::ios::out | std::ios::app);
  if (fresh) eval_log << "step,val_mca\n";

  std::vector<Index> scratch(train_idx.size());
  MatXf batch(cfg.batch_size, ds.samples.cols());
  std::vector<int> labels(static_cast<std::size_t>(cfg.batch_size));

  char line[256];
  while (state.step < cfg.steps) {
    // Per-step batch: a uniformly drawn prefix of the train indices.
    scratch = train_idx;
    for (Index j = 0; j < cfg.batch_size; ++j) {
      const Index pick =
          j + static_cast<Index>(state.rng.uniform_int(static_cast<std::uint64_t>(
                  static_cast<Index>(scratch.size()) - j)));
      std::swap(scratch[static_cast<std::size_t>(j)], scratch[static_cast<std::size_t>(pick)]);
      const Index src = scratch[static_cast<std::size_t>(j)];
      batch.row(j) = ds.samples.row(src);
      labels[static_cast<std::size_t>(j)] = ds.labels[static_cast<std::size_t>(src)];
    }

    const LossBundle bundle = train_step(state, batch, labels, seen_attrs, cfg);
    std::snprintf(line, sizeof(line), "%lld,%.9g,%.9g,%.9g,%.9g,%.9g,%lld\n",
                  static_cast<long long>(state.step), bundle.l_sa, bundle.l_sp, bundle.l_id,
                  bundle.l_total, bundle.pos_sim_mean,
                  static_cast<long long>(bundle.queue_length));
    metrics << line;

    if (state.step % cfg.eval_every == 0 || state.step == cfg.steps) {
      const double mca = val_mca(state, ds);
      if (mca >= 0.0) {
        std::snprintf(line, sizeof(line), "%lld,%.9g\n", static_cast<long long>(state.step), mca);
        eval_log << line;
      }
      save_checkpoint(state, cfg, out_dir / checkpoint_name(state.step));
    }
  }

  save_checkpoint(state, cfg, out_dir / "checkpoint.bin");
  return state;
}

}  // namespace dcen
