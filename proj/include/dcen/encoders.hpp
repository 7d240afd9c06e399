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

#ifndef DCEN_ENCODERS_HPP_
#define DCEN_ENCODERS_HPP_

#include <string>
#include <vector>

#include "dcen/nn.hpp"

// The four parameterized networks: visual encoder f, momentum key encoder g
// (same architecture, updated only by momentum blending), semantic encoder h
// (K blocks of dense/batchnorm/relu mapping attributes to the embedding
// space), and the attribute decoder (one fused block per input branch, then K
// decode blocks ending in a sigmoid).

namespace dcen {

struct ArchConfig {
  std::string backbone = "small_conv";  // small_conv | mlp_on_features
  Index image_size = 32;
  Index image_channels = 3;
  Index feature_dim = 0;  // input width in mlp_on_features mode
  Index embed_dim = 128;
  Index attr_dim = 16;
  int depth_k = 2;  // K, shared by the semantic encoder and the decoder
  std::vector<Index> conv_widths = {32, 64, 128};
  // "flatten" feeds the full final feature map to the affine head; "gap"
  // averages over positions first. Flatten is the default: position-coded
  // image properties survive it, which average pooling cannot offer.
  std::string head_pool = "flatten";
  Index mlp_hidden = 256;
  double bn_momentum = 0.1;
  bool decoder_on_unit = false;  // decoder consumes raw embeddings by default
};

void validate_arch_config(const ArchConfig& arch);

template <typename S>
struct ForwardOutput {
  MatX<S> raw;
  MatX<S> unit;  // rows of raw scaled to unit Euclidean length
};

// ---------------------------------------------------------------------------
// Visual encoder
// ---------------------------------------------------------------------------

template <typename S>
class VisualNet {
 public:
  struct Cache {
    Index batch = 0;
    std::vector<typename nn::ConvLayer::Cache<S>> conv;
    std::vector<typename nn::BatchNormLayer::Cache<S>> bn;
    std::vector<MatX<S>> relu_out;                     // post-activation per block
    MatX<S> head_in;                                   // pooled features
    MatX<S> mlp_in;                                    // mlp mode input
  };

  VisualNet() = default;

  explicit VisualNet(const ArchConfig& arch) : arch_(arch) {
    nn::LayoutBuilder params, state;
    if (arch.backbone == "small_conv") {
      Index h = arch.image_size, w = arch.image_size, c = arch.image_channels;
      for (Index width : arch.conv_widths) {
        nn::ConvLayer conv;
        conv.build(params, nn::make_conv_geom(h, w, c, width, 3, 2, 1));
        convs_.push_back(conv);
        nn::BatchNormLayer bn;
        bn.build(params, state, width);
        bns_.push_back(bn);
        h = conv.geom.out_h;
        w = conv.geom.out_w;
        c = width;
      }
      head_.build(params, arch.head_pool == "gap" ? c : h * w * c, arch.embed_dim);
    } else {
      dense1_.build(params, arch.feature_dim, arch.mlp_hidden);
      nn::BatchNormLayer bn;
      bn.build(params, state, arch.mlp_hidden);
      bns_.push_back(bn);
      head_.build(params, arch.mlp_hidden, arch.embed_dim);
    }
    params_ = VecX<S>::Zero(params.total());
    state_ = VecX<S>::Zero(state.total());
  }

  void init(Rng& rng) {
    if (conv_mode()) {
      for (std::size_t i = 0; i < convs_.size(); ++i) {
        convs_[i].init(params_, rng);
        bns_[i].init(params_, state_);
      }
    } else {
      dense1_.init(params_, rng);
      bns_[0].init(params_, state_);
    }
    head_.init(params_, rng);
  }

  bool conv_mode() const { return arch_.backbone == "small_conv"; }
  Index input_dim() const {
    return conv_mode() ? arch_.image_size * arch_.image_size * arch_.image_channels
                       : arch_.feature_dim;
  }

  /// x: one flat sample per row (HWC order in conv mode). Returns raw
  /// embeddings (batch x embed_dim).
  MatX<S> forward(const MatX<S>& x, nn::Mode mode, bool update_stats, Cache* cache) {
    if (x.cols() != input_dim())
      throw std::invalid_argument("visual forward: input width " + std::to_string(x.cols()) +
                                  " does not match expected " + std::to_string(input_dim()));
    const Index batch = x.rows();
    if (cache) {
      cache->batch = batch;
      cache->conv.resize(convs_.size());
      cache->bn.resize(bns_.size());
      cache->relu_out.resize(bns_.size());
    }

    if (!conv_mode()) {
      MatX<S> a1 = dense1_.forward(params_, x);
      typename nn::BatchNormLayer::Cache<S> bn_cache;
      MatX<S> a2 = bns_[0].forward(params_, state_, a1, mode, update_stats, arch_.bn_momentum,
                                   cache ? &cache->bn[0] : &bn_cache);
      MatX<S> a3 = nn::relu(a2);
      if (cache) {
        cache->mlp_in = x;
        cache->relu_out[0] = a3;
      }
      return head_.forward(params_, a3);
    }

    const Index hw = arch_.image_size * arch_.image_size;
    nn::RMatX<S> act(batch * hw, arch_.image_channels);
    for (Index b = 0; b < batch; ++b)
      for (Index p = 0; p < hw; ++p)
        for (Index c = 0; c < arch_.image_channels; ++c)
          act(b * hw + p, c) = x(b, p * arch_.image_channels + c);

    for (std::size_t i = 0; i < convs_.size(); ++i) {
      typename nn::ConvLayer::Cache<S> conv_cache;
      nn::RMatX<S> pre = convs_[i].forward(params_, act, batch, cache ? &cache->conv[i] : &conv_cache);
      typename nn::BatchNormLayer::Cache<S> bn_cache;
      MatX<S> normed = bns_[i].forward(params_, state_, pre, mode, update_stats, arch_.bn_momentum,
                                       cache ? &cache->bn[i] : &bn_cache);
      MatX<S> post = nn::relu(normed);
      if (cache) cache->relu_out[i] = post;
      act = post;
    }
    MatX<S> pooled = arch_.head_pool == "gap" ? nn::global_avg_pool(act, batch)
                                              : nn::flatten_positions(act, batch);
    if (cache) cache->head_in = pooled;
    return head_.forward(params_, pooled);
  }

  /// Accumulates parameter gradients for a raw-output gradient d_raw.
  void backward(const Cache& cache, const MatX<S>& d_raw, VecX<S>& grad) const {
    if (!conv_mode()) {
      MatX<S> d3 = head_.backward(params_, cache.relu_out[0], d_raw, grad);
      MatX<S> d2 = nn::relu_backward(cache.relu_out[0], d3);
      MatX<S> d1 = bns_[0].backward(params_, cache.bn[0], d2, grad);
      dense1_.backward(params_, cache.mlp_in, d1, grad, /*want_dx=*/false);
      return;
    }
    MatX<S> d_pool = head_.backward(params_, cache.head_in, d_raw, grad);
    const Index last = static_cast<Index>(convs_.size()) - 1;
    const Index positions = convs_[static_cast<std::size_t>(last)].geom.out_positions();
    nn::RMatX<S> d_act = arch_.head_pool == "gap"
                             ? nn::global_avg_pool_backward(d_pool, cache.batch, positions)
                             : nn::flatten_positions_backward(d_pool, cache.batch, positions);
    for (Index i = last; i >= 0; --i) {
      const auto idx = static_cast<std::size_t>(i);
      MatX<S> d_post = nn::relu_backward(cache.relu_out[idx], MatX<S>(d_act));
      MatX<S> d_pre = bns_[idx].backward(params_, cache.bn[idx], d_post, grad);
      d_act = convs_[idx].backward(params_, cache.conv[idx], nn::RMatX<S>(d_pre), cache.batch,
                                   grad, /*want_dx=*/i > 0);
    }
  }

  const ArchConfig& arch() const { return arch_; }
  Index param_count() const { return params_.size(); }
  Index state_count() const { return state_.size(); }

  VecX<S> params_;
  VecX<S> state_;

 private:
  ArchConfig arch_;
  std::vector<nn::ConvLayer> convs_;
  std::vector<nn::BatchNormLayer> bns_;
  nn::DenseLayer dense1_;  // mlp mode only
  nn::DenseLayer head_;
};

// ---------------------------------------------------------------------------
// Semantic encoder h: K blocks of dense/batchnorm/relu.
// ---------------------------------------------------------------------------

template <typename S>
class SemanticNet {
 public:
  struct Cache {
    std::vector<MatX<S>> block_in;
    std::vector<typename nn::BatchNormLayer::Cache<S>> bn;
    std::vector<MatX<S>> relu_out;
  };

  SemanticNet() = default;

  explicit SemanticNet(const ArchConfig& arch) : arch_(arch) {
    nn::LayoutBuilder params, state;
    Index in = arch.attr_dim;
    for (int i = 0; i < arch.depth_k; ++i) {
      nn::DenseLayer dense;
      dense.build(params, in, arch.embed_dim);
      denses_.push_back(dense);
      nn::BatchNormLayer bn;
      bn.build(params, state, arch.embed_dim);
      bns_.push_back(bn);
      in = arch.embed_dim;
    }
    params_ = VecX<S>::Zero(params.total());
    state_ = VecX<S>::Zero(state.total());
  }

  void init(Rng& rng) {
    for (std::size_t i = 0; i < denses_.size(); ++i) {
      denses_[i].init(params_, rng);
      bns_[i].init(params_, state_);
    }
  }

  MatX<S> forward(const MatX<S>& attrs, nn::Mode mode, bool update_stats, Cache* cache) {
    if (attrs.cols() != arch_.attr_dim)
      throw std::invalid_argument("semantic forward: attribute width " +
                                  std::to_string(attrs.cols()) + " does not match expected " +
                                  std::to_string(arch_.attr_dim));
    if (cache) {
      cache->block_in.resize(denses_.size());
      cache->bn.resize(denses_.size());
      cache->relu_out.resize(denses_.size());
    }
    MatX<S> act = attrs;
    for (std::size_t i = 0; i < denses_.size(); ++i) {
      if (cache) cache->block_in[i] = act;
      typename nn::BatchNormLayer::Cache<S> bn_cache;
      MatX<S> pre = denses_[i].forward(params_, act);
      MatX<S> normed = bns_[i].forward(params_, state_, pre, mode, update_stats, arch_.bn_momentum,
                                       cache ? &cache->bn[i] : &bn_cache);
      act = nn::relu(normed);
      if (cache) cache->relu_out[i] = act;
    }
    return act;
  }

  void backward(const Cache& cache, const MatX<S>& d_raw, VecX<S>& grad) const {
    MatX<S> d = d_raw;
    for (Index i = static_cast<Index>(denses_.size()) - 1; i >= 0; --i) {
      const auto idx = static_cast<std::size_t>(i);
      MatX<S> d_pre_bn = nn::relu_backward(cache.relu_out[idx], d);
      MatX<S> d_dense = bns_[idx].backward(params_, cache.bn[idx], d_pre_bn, grad);
      d = denses_[idx].backward(params_, cache.block_in[idx], d_dense, grad, /*want_dx=*/i > 0);
    }
  }

  const ArchConfig& arch() const { return arch_; }
  Index param_count() const { return params_.size(); }

  VecX<S> params_;
  VecX<S> state_;

 private:
  ArchConfig arch_;
  std::vector<nn::DenseLayer> denses_;
  std::vector<nn::BatchNormLayer> bns_;
};

// ---------------------------------------------------------------------------
// Attribute decoder: per-branch fuse blocks, concatenation, K decode blocks,
// sigmoid output in [0, 1].
// ---------------------------------------------------------------------------

template <typename S>
class DecoderNet {
 public:
  struct Cache {
    MatX<S> vis_in, sem_in;
    typename nn::BatchNormLayer::Cache<S> bn_v, bn_s;
    MatX<S> relu_v, relu_s;
    MatX<S> concat;
    std::vector<MatX<S>> block_in;
    std::vector<typename nn::BatchNormLayer::Cache<S>> bn;
    std::vector<MatX<S>> relu_out;
    MatX<S> out;  // sigmoid output
  };

  DecoderNet() = default;

  explicit DecoderNet(const ArchConfig& arch) : arch_(arch) {
    nn::LayoutBuilder params, state;
    fuse_v_.build(params, arch.embed_dim, arch.embed_dim);
    bn_v_.build(params, state, arch.embed_dim);
    fuse_s_.build(params, arch.embed_dim, arch.embed_dim);
    bn_s_.build(params, state, arch.embed_dim);

    Index in = 2 * arch.embed_dim;
    for (int i = 0; i < arch.depth_k; ++i) {
      const bool last = i + 1 == arch.depth_k;
      nn::DenseLayer dense;
      dense.build(params, in, last ? arch.attr_dim : arch.embed_dim);
      denses_.push_back(dense);
      if (!last) {
        nn::BatchNormLayer bn;
        bn.build(params, state, arch.embed_dim);
        bns_.push_back(bn);
      }
      in = arch.embed_dim;
    }
    params_ = VecX<S>::Zero(params.total());
    state_ = VecX<S>::Zero(state.total());
  }

  void init(Rng& rng) {
    fuse_v_.init(params_, rng);
    bn_v_.init(params_, state_);
    fuse_s_.init(params_, rng);
    bn_s_.init(params_, state_);
    for (std::size_t i = 0; i < denses_.size(); ++i) {
      denses_[i].init(params_, rng);
      if (i < bns_.size()) bns_[i].init(params_, state_);
    }
  }

  MatX<S> forward(const MatX<S>& vis, const MatX<S>& sem, nn::Mode mode, bool update_stats,
                  Cache* cache) {
    if (vis.rows() != sem.rows())
      throw std::invalid_argument("decoder forward: branch batch sizes differ");
    if (vis.cols() != arch_.embed_dim || sem.cols() != arch_.embed_dim)
      throw std::invalid_argument("decoder forward: branch width must equal embed_dim");

    Cache local;
    Cache& c = cache ? *cache : local;
    c.vis_in = vis;
    c.sem_in = sem;
    c.relu_v = nn::relu(MatX<S>(bn_v_.forward(params_, state_, fuse_v_.forward(params_, vis), mode,
                                              update_stats, arch_.bn_momentum, &c.bn_v)));
    c.relu_s = nn::relu(MatX<S>(bn_s_.forward(params_, state_, fuse_s_.forward(params_, sem), mode,
                                              update_stats, arch_.bn_momentum, &c.bn_s)));
    c.concat.resize(vis.rows(), 2 * arch_.embed_dim);
    c.concat << c.relu_v, c.relu_s;

    c.block_in.resize(denses_.size());
    c.bn.resize(bns_.size());
    c.relu_out.resize(bns_.size());
    MatX<S> act = c.concat;
    for (std::size_t i = 0; i < denses_.size(); ++i) {
      c.block_in[i] = act;
      MatX<S> pre = denses_[i].forward(params_, act);
      if (i + 1 < denses_.size()) {
        MatX<S> normed = bns_[i].forward(params_, state_, pre, mode, update_stats,
                                         arch_.bn_momentum, &c.bn[i]);
        act = nn::relu(normed);
        c.relu_out[i] = act;
      } else {
        act = nn::sigmoid(pre);
      }
    }
    c.out = act;
    return act;
  }

  /// Accumulates parameter gradients; optionally emits gradients w.r.t. the
  /// two input branches.
  void backward(const Cache& cache, const MatX<S>& d_out, VecX<S>& grad, MatX<S>* d_vis,
                MatX<S>* d_sem) const {
    MatX<S> d = nn::sigmoid_backward(cache.out, d_out);
    for (Index i = static_cast<Index>(denses_.size()) - 1; i >= 0; --i) {
      const auto idx = static_cast<std::size_t>(i);
      if (idx + 1 < denses_.size()) {
        MatX<S> d_pre_bn = nn::relu_backward(cache.relu_out[idx], d);
        d = bns_[idx].backward(params_, cache.bn[idx], d_pre_bn, grad);
      }
      d = denses_[idx].backward(params_, cache.block_in[idx], d, grad, /*want_dx=*/true);
    }
    MatX<S> d_relu_v = d.leftCols(arch_.embed_dim);
    MatX<S> d_relu_s = d.rightCols(arch_.embed_dim);

    MatX<S> dv = bn_v_.backward(params_, cache.bn_v, nn::relu_backward(cache.relu_v, d_relu_v), grad);
    MatX<S> dv_in = fuse_v_.backward(params_, cache.vis_in, dv, grad, d_vis != nullptr);
    if (d_vis) *d_vis = std::move(dv_in);

    MatX<S> ds = bn_s_.backward(params_, cache.bn_s, nn::relu_backward(cache.relu_s, d_relu_s), grad);
    MatX<S> ds_in = fuse_s_.backward(params_, cache.sem_in, ds, grad, d_sem != nullptr);
    if (d_sem) *d_sem = std::move(ds_in);
  }

  const ArchConfig& arch() const { return arch_; }
  Index param_count() const { return params_.size(); }

  VecX<S> params_;
  VecX<S> state_;

 private:
  ArchConfig arch_;
  nn::DenseLayer fuse_v_, fuse_s_;
  nn::BatchNormLayer bn_v_, bn_s_;
  std::vector<nn::DenseLayer> denses_;
  std::vector<nn::BatchNormLayer> bns_;
};

// ---------------------------------------------------------------------------
// EncoderSet and the operations over it.
// ---------------------------------------------------------------------------

template <typename S>
struct EncoderSet {
  ArchConfig arch;
  VisualNet<S> visual;    // f
  VisualNet<S> momentum;  // g, parameters blended from f
  SemanticNet<S> semantic;
  DecoderNet<S> decoder;
};

/// Deterministic initialization; g starts as an exact copy of f.
template <typename S>
EncoderSet<S> init_encoders(const ArchConfig& arch, std::uint64_t seed) {
  validate_arch_config(arch);
  EncoderSet<S> set;
  set.arch = arch;
  set.visual = VisualNet<S>(arch);
  set.semantic = SemanticNet<S>(arch);
  set.decoder = DecoderNet<S>(arch);
  Rng rng(seed);
  set.visual.init(rng);
  set.semantic.init(rng);
  set.decoder.init(rng);
  set.momentum = set.visual;
  return set;
}

/// W_g <- m * W_g + (1 - m) * W_f, elementwise over the whole parameter
/// vector. m = 1 keeps g, m = 0 copies f. Gradients never reach g.
template <typename S>
void momentum_update(EncoderSet<S>& set, S m) {
  if (!(m >= S(0) && m <= S(1)))
    throw std::invalid_argument("momentum_update: m must lie in [0,1]");
  set.momentum.params_ = m * set.momentum.params_ + (S(1) - m) * set.visual.params_;
}

template <typename S>
ForwardOutput<S> visual_forward(VisualNet<S>& net, const MatX<S>& batch, nn::Mode mode,
                                bool update_stats = false,
                                typename VisualNet<S>::Cache* cache = nullptr) {
  ForwardOutput<S> out;
  out.raw = net.forward(batch, mode, update_stats, cache);
  out.unit = l2_normalize_rows(out.raw);
  return out;
}

template <typename S>
ForwardOutput<S> semantic_forward(SemanticNet<S>& net, const MatX<S>& attrs, nn::Mode mode,
                                  bool update_stats = false,
                                  typename SemanticNet<S>::Cache* cache = nullptr) {
  ForwardOutput<S> out;
  out.raw = net.forward(attrs, mode, update_stats, cache);
  out.unit = l2_normalize_rows(out.raw);
  return out;
}

template <typename S>
MatX<S> decoder_forward(DecoderNet<S>& net, const MatX<S>& visual_raw, const MatX<S>& semantic_raw,
                        nn::Mode mode, bool update_stats = false,
                        typename DecoderNet<S>::Cache* cache = nullptr) {
  return net.forward(visual_raw, semantic_raw, mode, update_stats, cache);
}

}  // namespace dcen

#endif  // DCEN_ENCODERS_HPP_
