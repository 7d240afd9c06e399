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

#ifndef DCEN_NN_HPP_
#define DCEN_NN_HPP_

#include <cmath>
#include <vector>

#include "dcen/rng.hpp"
#include "dcen/types.hpp"

// Dense layer kernels with hand-written backward passes, templated on the
// scalar so the same code runs float for training and double for
// finite-difference verification. Batch convention: rows are samples.
// Parameters of a network live in one flat vector; layers address it through
// BlockRef offsets, which keeps momentum blending, SGD, and checkpointing a
// matter of whole-vector arithmetic.

namespace dcen::nn {

enum class Mode { kTrain, kEval };

template <typename S>
using RMatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct BlockRef {
  Index offset = 0;
  Index rows = 0;
  Index cols = 0;
  Index size() const { return rows * cols; }
};

/// Sequential allocator for flat parameter / state vectors.
class LayoutBuilder {
 public:
  BlockRef add(Index rows, Index cols) {
    BlockRef b{total_, rows, cols};
    total_ += rows * cols;
    return b;
  }
  Index total() const { return total_; }

 private:
  Index total_ = 0;
};

template <typename S>
Eigen::Map<MatX<S>> map_block(VecX<S>& v, const BlockRef& b) {
  return Eigen::Map<MatX<S>>(v.data() + b.offset, b.rows, b.cols);
}
template <typename S>
Eigen::Map<const MatX<S>> map_block(const VecX<S>& v, const BlockRef& b) {
  return Eigen::Map<const MatX<S>>(v.data() + b.offset, b.rows, b.cols);
}

constexpr double kBnEps = 1e-5;

// ---------------------------------------------------------------------------
// Dense: Y = X * W^T + b, W is (out x in).
// ---------------------------------------------------------------------------

struct DenseLayer {
  Index in = 0, out = 0;
  BlockRef w, b;

  void build(LayoutBuilder& params, Index in_dim, Index out_dim) {
    in = in_dim;
    out = out_dim;
    w = params.add(out_dim, in_dim);
    b = params.add(out_dim, 1);
  }

  template <typename S>
  void init(VecX<S>& params, Rng& rng) const {
    auto W = map_block(params, w);
    const double bound = std::sqrt(6.0 / static_cast<double>(in));
    for (Index j = 0; j < W.cols(); ++j)
      for (Index i = 0; i < W.rows(); ++i) W(i, j) = static_cast<S>(rng.uniform(-bound, bound));
    map_block(params, b).setZero();
  }

  template <typename S, typename In>
  MatX<S> forward(const VecX<S>& params, const In& x) const {
    MatX<S> y = x * map_block(params, w).transpose();
    y.rowwise() += map_block(params, b).col(0).transpose();
    return y;
  }

  /// Accumulates dW/db into grad; returns dX when want_dx.
  template <typename S, typename In>
  MatX<S> backward(const VecX<S>& params, const In& x, const MatX<S>& dy, VecX<S>& grad,
                   bool want_dx = true) const {
    map_block(grad, w) += dy.transpose() * x;
    map_block(grad, b).col(0) += dy.colwise().sum().transpose();
    if (!want_dx) return MatX<S>();
    return dy * map_block(params, w);
  }
};

// ---------------------------------------------------------------------------
// BatchNorm over rows: per-column statistics. Running stats live in the
// separate state vector; they are consulted in eval mode and refreshed in
// train mode when update_stats is set.
// ---------------------------------------------------------------------------

struct BatchNormLayer {
  Index dim = 0;
  BlockRef gamma, beta;        // in params
  BlockRef run_mean, run_var;  // in state

  void build(LayoutBuilder& params, LayoutBuilder& state, Index d) {
    dim = d;
    gamma = params.add(d, 1);
    beta = params.add(d, 1);
    run_mean = state.add(d, 1);
    run_var = state.add(d, 1);
  }

  template <typename S>
  void init(VecX<S>& params, VecX<S>& state) const {
    map_block(params, gamma).setOnes();
    map_block(params, beta).setZero();
    map_block(state, run_mean).setZero();
    map_block(state, run_var).setOnes();
  }

  template <typename S>
  struct Cache {
    MatX<S> xhat;
    RowX<S> inv_std;
    Mode mode = Mode::kTrain;
  };

  template <typename S, typename In>
  MatX<S> forward(const VecX<S>& params, VecX<S>& state, const In& x, Mode mode,
                  bool update_stats, double momentum, Cache<S>* cache) const {
    const Index batch = x.rows();
    const auto g_row = map_block(params, gamma).col(0).transpose();
    const auto b_row = map_block(params, beta).col(0).transpose();

    RowX<S> mean, inv_std;
    if (mode == Mode::kTrain) {
      mean = x.colwise().mean();
      RowX<S> var =
          (x.rowwise() - mean).array().square().matrix().colwise().mean();
      inv_std = (var.array() + S(kBnEps)).rsqrt();
      if (update_stats) {
        auto rm = map_block(state, run_mean).col(0);
        auto rv = map_block(state, run_var).col(0);
        RowX<S> var_unbiased =
            batch > 1 ? RowX<S>(var * S(batch) / S(batch - 1)) : var;
        rm = (S(1) - S(momentum)) * rm + S(momentum) * mean.transpose();
        rv = (S(1) - S(momentum)) * rv + S(momentum) * var_unbiased.transpose();
      }
    } else {
      mean = map_block(state, run_mean).col(0).transpose();
      inv_std =
          (map_block(state, run_var).col(0).transpose().array() + S(kBnEps)).rsqrt();
    }

    MatX<S> xhat =
        ((x.rowwise() - mean).array().rowwise() * inv_std.array()).matrix();
    MatX<S> y = (xhat.array().rowwise() * g_row.array()).matrix();
    y.rowwise() += b_row;
    if (cache) {
      cache->xhat = xhat;
      cache->inv_std = inv_std;
      cache->mode = mode;
    }
    return y;
  }

  template <typename S>
  MatX<S> backward(const VecX<S>& params, const Cache<S>& cache, const MatX<S>& dy,
                   VecX<S>& grad) const {
    const auto g_row = map_block(params, gamma).col(0).transpose();
    map_block(grad, gamma).col(0) +=
        (dy.array() * cache.xhat.array()).colwise().sum().matrix().transpose();
    map_block(grad, beta).col(0) += dy.colwise().sum().transpose();

    MatX<S> dxhat = (dy.array().rowwise() * g_row.array()).matrix();
    if (cache.mode == Mode::kEval)
      return (dxhat.array().rowwise() * cache.inv_std.array()).matrix();

    const S batch = static_cast<S>(dy.rows());
    RowX<S> sum_dxhat = dxhat.colwise().sum();
    RowX<S> sum_dxhat_xhat = (dxhat.array() * cache.xhat.array()).colwise().sum();
    MatX<S> dx = batch * dxhat;
    dx.rowwise() -= sum_dxhat;
    dx.array() -= cache.xhat.array().rowwise() * sum_dxhat_xhat.array();
    dx.array().rowwise() *= (cache.inv_std.array() / batch);
    return dx;
  }
};

// ---------------------------------------------------------------------------
// Elementwise activations.
// ---------------------------------------------------------------------------

template <typename S>
MatX<S> relu(const MatX<S>& x) {
  return x.cwiseMax(S(0));
}

template <typename S>
MatX<S> relu_backward(const MatX<S>& y, const MatX<S>& dy) {
  return (y.array() > S(0)).select(dy, MatX<S>::Zero(dy.rows(), dy.cols()));
}

template <typename S>
MatX<S> sigmoid(const MatX<S>& x) {
  return ((-x.array()).exp() + S(1)).inverse().matrix();
}

template <typename S>
MatX<S> sigmoid_backward(const MatX<S>& y, const MatX<S>& dy) {
  return (dy.array() * y.array() * (S(1) - y.array())).matrix();
}

// ---------------------------------------------------------------------------
// Convolution via im2col. Activations between conv layers are stored as
// (batch * positions) x channels, row-major so per-position rows are
// contiguous; position index is y * width + x.
// ---------------------------------------------------------------------------

struct ConvGeom {
  Index in_h = 0, in_w = 0, in_c = 0, out_c = 0;
  Index k = 3, stride = 2, pad = 1;
  Index out_h = 0, out_w = 0;
  std::vector<Index> taps;  // out positions * k*k -> input position or -1

  Index in_positions() const { return in_h * in_w; }
  Index out_positions() const { return out_h * out_w; }
  Index patch_width() const { return k * k * in_c; }
};

inline ConvGeom make_conv_geom(Index in_h, Index in_w, Index in_c, Index out_c, Index k,
                               Index stride, Index pad) {
  ConvGeom g;
  g.in_h = in_h;
  g.in_w = in_w;
  g.in_c = in_c;
  g.out_c = out_c;
  g.k = k;
  g.stride = stride;
  g.pad = pad;
  g.out_h = (in_h + 2 * pad - k) / stride + 1;
  g.out_w = (in_w + 2 * pad - k) / stride + 1;
  g.taps.resize(static_cast<std::size_t>(g.out_positions() * k * k));
  for (Index oy = 0; oy < g.out_h; ++oy)
    for (Index ox = 0; ox < g.out_w; ++ox)
      for (Index ky = 0; ky < k; ++ky)
        for (Index kx = 0; kx < k; ++kx) {
          const Index iy = oy * stride - pad + ky;
          const Index ix = ox * stride - pad + kx;
          const bool inside = iy >= 0 && iy < in_h && ix >= 0 && ix < in_w;
          g.taps[static_cast<std::size_t>(((oy * g.out_w + ox) * k + ky) * k + kx)] =
              inside ? iy * in_w + ix : Index(-1);
        }
  return g;
}

struct ConvLayer {
  ConvGeom geom;
  BlockRef w, b;  // W is (out_c x k*k*in_c)

  void build(LayoutBuilder& params, const ConvGeom& g) {
    geom = g;
    w = params.add(g.out_c, g.patch_width());
    b = params.add(g.out_c, 1);
  }

  template <typename S>
  void init(VecX<S>& params, Rng& rng) const {
    auto W = map_block(params, w);
    const double bound = std::sqrt(6.0 / static_cast<double>(geom.patch_width()));
    for (Index j = 0; j < W.cols(); ++j)
      for (Index i = 0; i < W.rows(); ++i) W(i, j) = static_cast<S>(rng.uniform(-bound, bound));
    map_block(params, b).setZero();
  }

  template <typename S>
  RMatX<S> im2col(const RMatX<S>& x, Index batch) const {
    const Index p_in = geom.in_positions(), p_out = geom.out_positions();
    const Index kk = geom.k * geom.k, c = geom.in_c;
    RMatX<S> patches = RMatX<S>::Zero(batch * p_out, geom.patch_width());
    for (Index bi = 0; bi < batch; ++bi)
      for (Index p = 0; p < p_out; ++p) {
        const Index row = bi * p_out + p;
        for (Index t = 0; t < kk; ++t) {
          const Index src = geom.taps[static_cast<std::size_t>(p * kk + t)];
          if (src >= 0)
            patches.block(row, t * c, 1, c) = x.block(bi * p_in + src, 0, 1, c);
        }
      }
    return patches;
  }

  template <typename S>
  struct Cache {
    RMatX<S> patches;  // (batch * out_positions) x patch_width
  };

  /// x: (batch * in_positions) x in_c. Returns (batch * out_positions) x out_c.
  template <typename S>
  RMatX<S> forward(const VecX<S>& params, const RMatX<S>& x, Index batch, Cache<S>* cache) const {
    RMatX<S> patches = im2col(x, batch);
    RMatX<S> y = patches * map_block(params, w).transpose();
    y.rowwise() += map_block(params, b).col(0).transpose();
    if (cache) cache->patches = std::move(patches);
    return y;
  }

  template <typename S>
  RMatX<S> backward(const VecX<S>& params, const Cache<S>& cache, const RMatX<S>& dy, Index batch,
                    VecX<S>& grad, bool want_dx) const {
    map_block(grad, w) += dy.transpose() * cache.patches;
    map_block(grad, b).col(0) += dy.colwise().sum().transpose();
    if (!want_dx) return RMatX<S>();

    RMatX<S> dpatches = dy * map_block(params, w);
    const Index p_in = geom.in_positions(), p_out = geom.out_positions();
    const Index kk = geom.k * geom.k, c = geom.in_c;
    RMatX<S> dx = RMatX<S>::Zero(batch * p_in, c);
    for (Index bi = 0; bi < batch; ++bi)
      for (Index p = 0; p < p_out; ++p) {
        const Index row = bi * p_out + p;
        for (Index t = 0; t < kk; ++t) {
          const Index src = geom.taps[static_cast<std::size_t>(p * kk + t)];
          if (src >= 0)
            dx.block(bi * p_in + src, 0, 1, c) += dpatches.block(row, t * c, 1, c);
        }
      }
    return dx;
  }
};

/// (batch * positions) x channels -> batch x channels.
template <typename S>
MatX<S> global_avg_pool(const RMatX<S>& x, Index batch) {
  const Index p = x.rows() / batch;
  MatX<S> y(batch, x.cols());
  for (Index bi = 0; bi < batch; ++bi)
    y.row(bi) = x.middleRows(bi * p, p).colwise().mean();
  return y;
}

template <typename S>
RMatX<S> global_avg_pool_backward(const MatX<S>& dy, Index batch, Index positions) {
  RMatX<S> dx(batch * positions, dy.cols());
  for (Index bi = 0; bi < batch; ++bi)
    dx.middleRows(bi * positions, positions) =
        (dy.row(bi) / S(positions)).replicate(positions, 1);
  return dx;
}

/// (batch * positions) x channels -> batch x (positions * channels). The
/// row-major activation makes each sample's block contiguous.
template <typename S>
MatX<S> flatten_positions(const RMatX<S>& x, Index batch) {
  const Index width = x.size() / batch;
  MatX<S> y(batch, width);
  for (Index bi = 0; bi < batch; ++bi)
    y.row(bi) = Eigen::Map<const RowX<S>>(x.data() + bi * width, width);
  return y;
}

template <typename S>
RMatX<S> flatten_positions_backward(const MatX<S>& dy, Index batch, Index positions) {
  const Index width = dy.cols();
  RMatX<S> dx(batch * positions, width / positions);
  for (Index bi = 0; bi < batch; ++bi) {
    const RowX<S> row = dy.row(bi);
    Eigen::Map<RowX<S>>(dx.data() + bi * width, width) = row;
  }
  return dx;
}

}  // namespace dcen::nn

#endif  // DCEN_NN_HPP_
