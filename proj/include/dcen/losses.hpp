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

#ifndef DCEN_LOSSES_HPP_
#define DCEN_LOSSES_HPP_

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "dcen/rng.hpp"
#include "dcen/types.hpp"

// Objective terms. Distances are negative cosine similarities on unit rows;
// components report similarities s and use d = -s throughout. Backward
// functions return (or accumulate) gradients w.r.t. the unit-normalized
// inputs; callers chain through the row-normalization.

namespace dcen {

// ---------------------------------------------------------------------------
// Attribute masking
// ---------------------------------------------------------------------------

template <typename S>
struct MaskResult {
  MatX<S> masked_attrs;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;  // true = zeroed
  std::vector<bool> was_chosen;
};

/// Per row: with probability choose_p the row is chosen and
/// round(sigma_pct/100 * D) positions, drawn uniformly without replacement,
/// are zeroed. Unchosen rows pass through unchanged.
template <typename S>
MaskResult<S> mask_attributes(const MatX<S>& attrs, double sigma_pct, double choose_p, Rng& rng) {
  if (sigma_pct < 0.0 || sigma_pct > 100.0)
    throw std::invalid_argument("mask_attributes: sigma_pct outside [0,100]");
  if (choose_p < 0.0 || choose_p > 1.0)
    throw std::invalid_argument("mask_attributes: choose_p outside [0,1]");

  const Index n = attrs.rows(), d = attrs.cols();
  const Index count = static_cast<Index>(
      std::llround(sigma_pct / 100.0 * static_cast<double>(d)));

  MaskResult<S> res;
  res.masked_attrs = attrs;
  res.mask.setConstant(n, d, false);
  res.was_chosen.assign(static_cast<std::size_t>(n), false);

  std::vector<Index> positions(static_cast<std::size_t>(d));
  for (Index i = 0; i < n; ++i) {
    const bool chosen = rng.uniform() < choose_p;
    res.was_chosen[static_cast<std::size_t>(i)] = chosen;
    if (!chosen || count == 0) continue;
    for (Index j = 0; j < d; ++j) positions[static_cast<std::size_t>(j)] = j;
    // partial Fisher-Yates: first `count` entries are a uniform subset
    for (Index j = 0; j < count; ++j) {
      const Index pick = j + static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(d - j)));
      std::swap(positions[static_cast<std::size_t>(j)], positions[static_cast<std::size_t>(pick)]);
      const Index col = positions[static_cast<std::size_t>(j)];
      res.mask(i, col) = true;
      res.masked_attrs(i, col) = S(0);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Baseline alignment: mean over the batch of -cos(f_i, target_i).
// ---------------------------------------------------------------------------

template <typename S>
S zsl_loss(const MatX<S>& visual_units, const MatX<S>& target_units) {
  if (visual_units.rows() != target_units.rows() || visual_units.cols() != target_units.cols())
    throw std::invalid_argument("zsl_loss: batch misalignment");
  if (visual_units.rows() == 0) throw std::invalid_argument("zsl_loss: empty batch");
  const S mean_sim =
      (visual_units.array() * target_units.array()).rowwise().sum().mean();
  return -mean_sim;
}

/// Adds scale * d(loss)/d(inputs) into the output buffers (either may be null).
template <typename S>
void zsl_loss_backward(const MatX<S>& visual_units, const MatX<S>& target_units, S scale,
                       MatX<S>* d_visual, MatX<S>* d_target) {
  const S f = -scale / static_cast<S>(visual_units.rows());
  if (d_visual) *d_visual += f * target_units;
  if (d_target) *d_target += f * visual_units;
}

// ---------------------------------------------------------------------------
// Cross-modal triplet over seen-class embeddings with the most confusing
// negative: mean_i [ d(f_i, h_pos) - min_{y_k != y_i} d(f_i, h_k) ].
// ---------------------------------------------------------------------------

template <typename S>
struct AlignmentResult {
  S loss = S(0);
  S pos_sim_mean = S(0);
  std::vector<int> hardest_ids;   // class id of the selected negative per sample
  std::vector<Index> pos_rows, neg_rows;
  std::vector<bool> active;       // false only when the hinge clips a sample
};

template <typename S>
AlignmentResult<S> semantic_alignment_loss(const MatX<S>& visual_units,
                                           const std::vector<int>& labels,
                                           const MatX<S>& class_units,
                                           const std::vector<int>& class_ids,
                                           bool hinge = false, S margin = S(0)) {
  const Index batch = visual_units.rows();
  const Index n_cls = class_units.rows();
  if (static_cast<Index>(labels.size()) != batch)
    throw std::invalid_argument("semantic_alignment_loss: labels/batch mismatch");
  if (static_cast<Index>(class_ids.size()) != n_cls)
    throw std::invalid_argument("semantic_alignment_loss: class_ids/class_units mismatch");
  if (n_cls < 2)
    throw std::invalid_argument("semantic_alignment_loss: need at least two classes");

  std::unordered_map<int, Index> row_of;
  for (Index r = 0; r < n_cls; ++r) row_of[class_ids[static_cast<std::size_t>(r)]] = r;

  const MatX<S> sims = visual_units * class_units.transpose();  // (batch x n_cls)

  AlignmentResult<S> res;
  res.hardest_ids.resize(static_cast<std::size_t>(batch));
  res.pos_rows.resize(static_cast<std::size_t>(batch));
  res.neg_rows.resize(static_cast<std::size_t>(batch));
  res.active.assign(static_cast<std::size_t>(batch), true);

  S loss_sum = S(0), pos_sum = S(0);
  for (Index i = 0; i < batch; ++i) {
    const auto it = row_of.find(labels[static_cast<std::size_t>(i)]);
    if (it == row_of.end())
      throw std::invalid_argument("semantic_alignment_loss: label " +
                                  std::to_string(labels[static_cast<std::size_t>(i)]) +
                                  " has no class embedding");
    const Index pos = it->second;
    Index best = -1;
    S best_sim = S(0);
    for (Index k = 0; k < n_cls; ++k) {
      if (k == pos) continue;
      if (best < 0 || sims(i, k) > best_sim) {
        best = k;
        best_sim = sims(i, k);
      }
    }
    const S d_pos = -sims(i, pos);
    const S d_neg = -best_sim;  // min distance = most confusing negative
    S term = d_pos - d_neg;
    if (hinge) {
      term += margin;
      if (term <= S(0)) {
        term = S(0);
        res.active[static_cast<std::size_t>(i)] = false;
      }
    }
    loss_sum += term;
    pos_sum += sims(i, pos);
    res.pos_rows[static_cast<std::size_t>(i)] = pos;
    res.neg_rows[static_cast<std::size_t>(i)] = best;
    res.hardest_ids[static_cast<std::size_t>(i)] = class_ids[static_cast<std::size_t>(best)];
  }
  res.loss = loss_sum / static_cast<S>(batch);
  res.pos_sim_mean = pos_sum / static_cast<S>(batch);
  return res;
}

/// Adds scale * d(loss)/d(inputs) into the buffers, treating the argmin
/// negatives as fixed.
template <typename S>
void semantic_alignment_backward(const MatX<S>& visual_units, const MatX<S>& class_units,
                                 const AlignmentResult<S>& res, S scale, MatX<S>* d_visual,
                                 MatX<S>* d_class) {
  const Index batch = visual_units.rows();
  const S f = scale / static_cast<S>(batch);
  for (Index i = 0; i < batch; ++i) {
    if (!res.active[static_cast<std::size_t>(i)]) continue;
    const Index pos = res.pos_rows[static_cast<std::size_t>(i)];
    const Index neg = res.neg_rows[static_cast<std::size_t>(i)];
    if (d_visual)
      d_visual->row(i) += f * (class_units.row(neg) - class_units.row(pos));
    if (d_class) {
      d_class->row(pos) -= f * visual_units.row(i);
      d_class->row(neg) += f * visual_units.row(i);
    }
  }
}

// ---------------------------------------------------------------------------
// Masked attribute prediction: mean unsquared L2 residual norm.
// ---------------------------------------------------------------------------

template <typename S>
S attribute_prediction_loss(const MatX<S>& predicted, const MatX<S>& target) {
  if (predicted.rows() != target.rows() || predicted.cols() != target.cols())
    throw std::invalid_argument("attribute_prediction_loss: shape mismatch");
  if (predicted.rows() == 0) throw std::invalid_argument("attribute_prediction_loss: empty batch");
  S sum = S(0);
  for (Index i = 0; i < predicted.rows(); ++i) sum += (predicted.row(i) - target.row(i)).norm();
  return sum / static_cast<S>(predicted.rows());
}

/// Gradient of the mean residual norm; the zero-residual point (where the
/// norm is not differentiable) contributes a zero row.
template <typename S>
MatX<S> attribute_prediction_backward(const MatX<S>& predicted, const MatX<S>& target, S scale) {
  const Index batch = predicted.rows();
  MatX<S> d = MatX<S>::Zero(batch, predicted.cols());
  for (Index i = 0; i < batch; ++i) {
    const RowX<S> r = predicted.row(i) - target.row(i);
    const S n = r.norm();
    if (n > S(1e-12)) d.row(i) = (scale / (static_cast<S>(batch) * n)) * r;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Negative queue (FIFO ring buffer of unit key rows).
// ---------------------------------------------------------------------------

template <typename S>
struct NegativeQueue {
  MatX<S> buffer;  // (capacity x dim)
  Index length = 0;
  Index cursor = 0;  // next write slot

  NegativeQueue() = default;
  NegativeQueue(Index capacity, Index dim) : buffer(MatX<S>::Zero(capacity, dim)) {}

  Index capacity() const { return buffer.rows(); }
  Index dim() const { return buffer.cols(); }

  /// Stored rows ordered oldest to newest.
  MatX<S> snapshot() const {
    MatX<S> out(length, dim());
    const Index start = length == capacity() ? cursor : 0;
    for (Index i = 0; i < length; ++i) out.row(i) = buffer.row((start + i) % capacity());
    return out;
  }
};

/// FIFO append; once full, each write evicts the oldest row.
template <typename S>
void enqueue(NegativeQueue<S>& queue, const MatX<S>& keys) {
  if (keys.cols() != queue.dim())
    throw std::invalid_argument("enqueue: key dim " + std::to_string(keys.cols()) +
                                " does not match queue dim " + std::to_string(queue.dim()));
  for (Index i = 0; i < keys.rows(); ++i) {
    queue.buffer.row(queue.cursor) = keys.row(i);
    queue.cursor = (queue.cursor + 1) % queue.capacity();
    queue.length = std::min(queue.length + 1, queue.capacity());
  }
}

// ---------------------------------------------------------------------------
// Instance discrimination: softmax cross-entropy with the aligned key as the
// positive and all queue rows as negatives. Keys and queue carry no gradient.
// ---------------------------------------------------------------------------

template <typename S>
S instance_discrimination_loss(const MatX<S>& query_units, const MatX<S>& key_units,
                               const NegativeQueue<S>& queue, S tau) {
  const Index batch = query_units.rows();
  if (batch == 0) throw std::invalid_argument("instance_discrimination_loss: empty batch");
  if (!(tau > S(0))) throw std::invalid_argument("instance_discrimination_loss: tau must be > 0");
  if (key_units.rows() != batch || key_units.cols() != query_units.cols())
    throw std::invalid_argument("instance_discrimination_loss: query/key mismatch");
  const Index n_neg = queue.length;
  if (n_neg > 0 && queue.dim() != query_units.cols())
    throw std::invalid_argument("instance_discrimination_loss: queue dim mismatch");
  if (n_neg == 0) return S(0);  // numerator equals denominator

  const auto negs = queue.buffer.topRows(n_neg);
  const VecX<S> s_pos = (query_units.array() * key_units.array()).rowwise().sum();
  const MatX<S> s_neg = query_units * negs.transpose();  // (batch x n_neg)

  S loss = S(0);
  for (Index i = 0; i < batch; ++i) {
    const S lp = s_pos[i] / tau;
    S mx = lp;
    for (Index j = 0; j < n_neg; ++j) mx = std::max(mx, s_neg(i, j) / tau);
    S denom = std::exp(lp - mx);
    for (Index j = 0; j < n_neg; ++j) denom += std::exp(s_neg(i, j) / tau - mx);
    loss += mx + std::log(denom) - lp;  // logsumexp - positive logit
  }
  return loss / static_cast<S>(batch);
}

/// Gradient w.r.t. the queries only.
template <typename S>
MatX<S> instance_discrimination_backward(const MatX<S>& query_units, const MatX<S>& key_units,
                                         const NegativeQueue<S>& queue, S tau, S scale) {
  const Index batch = query_units.rows();
  const Index n_neg = queue.length;
  MatX<S> d = MatX<S>::Zero(batch, query_units.cols());
  if (n_neg == 0) return d;  // constant-zero loss

  const auto negs = queue.buffer.topRows(n_neg);
  const VecX<S> s_pos = (query_units.array() * key_units.array()).rowwise().sum();
  const MatX<S> s_neg = query_units * negs.transpose();

  const S f = scale / (tau * static_cast<S>(batch));
  for (Index i = 0; i < batch; ++i) {
    const S lp = s_pos[i] / tau;
    S mx = lp;
    for (Index j = 0; j < n_neg; ++j) mx = std::max(mx, s_neg(i, j) / tau);
    S denom = std::exp(lp - mx);
    for (Index j = 0; j < n_neg; ++j) denom += std::exp(s_neg(i, j) / tau - mx);
    const S p_pos = std::exp(lp - mx) / denom;
    d.row(i) += f * (p_pos - S(1)) * key_units.row(i);
    for (Index j = 0; j < n_neg; ++j) {
      const S p = std::exp(s_neg(i, j) / tau - mx) / denom;
      d.row(i) += f * p * negs.row(j);
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Overall objective
// ---------------------------------------------------------------------------

template <typename S>
S total_loss(S l_sa, S l_sp, S l_id, S lambda1, S lambda2) {
  if (lambda1 < S(0) || lambda2 < S(0))
    throw std::invalid_argument("total_loss: weights must be >= 0");
  return lambda1 * l_id + l_sa + lambda2 * l_sp;
}

/// Per-step loss record. l_total is always lambda1*l_id + l_sa + lambda2*l_sp
/// computed in double over the stored fields.
struct LossBundle {
  double l_sa = 0.0;
  double l_sp = 0.0;
  double l_id = 0.0;
  double l_total = 0.0;
  double pos_sim_mean = 0.0;
  std::vector<int> hardest_negative_ids;
  Index queue_length = 0;
};

}  // namespace dcen

#endif  // DCEN_LOSSES_HPP_
