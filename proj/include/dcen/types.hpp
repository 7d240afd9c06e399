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

#ifndef DCEN_TYPES_HPP_
#define DCEN_TYPES_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dcen {

using Index = Eigen::Index;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatXf = MatX<float>;
using VecXf = VecX<float>;
using MatXd = MatX<double>;
using VecXd = VecX<double>;

/// Thrown by loaders and config parsers; message carries file/record location.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

template <typename Scalar>
Scalar clamp01(Scalar v) {
  return v < Scalar(0) ? Scalar(0) : (v > Scalar(1) ? Scalar(1) : v);
}

/// Normalizes every row of `raw` to unit Euclidean length. Rows with
/// vanishing norm are guarded with `eps` so the result stays finite.
template <typename Scalar>
MatX<Scalar> l2_normalize_rows(const MatX<Scalar>& raw, Scalar eps = Scalar(1e-12)) {
  MatX<Scalar> unit(raw.rows(), raw.cols());
  for (Index i = 0; i < raw.rows(); ++i) {
    Scalar n = raw.row(i).norm();
    unit.row(i) = raw.row(i) / (n > eps ? n : eps);
  }
  return unit;
}

/// Backward of l2_normalize_rows: given raw inputs, their unit rows, and the
/// gradient w.r.t. the unit rows, returns the gradient w.r.t. the raw rows.
/// Per row: d_raw = (d_unit - u * (u . d_unit)) / ||raw||.
template <typename Scalar>
MatX<Scalar> l2_normalize_rows_backward(const MatX<Scalar>& raw, const MatX<Scalar>& unit,
                                        const MatX<Scalar>& d_unit, Scalar eps = Scalar(1e-12)) {
  MatX<Scalar> d_raw(raw.rows(), raw.cols());
  for (Index i = 0; i < raw.rows(); ++i) {
    Scalar n = raw.row(i).norm();
    if (n <= eps) n = eps;
    Scalar proj = unit.row(i).dot(d_unit.row(i));
    d_raw.row(i) = (d_unit.row(i) - proj * unit.row(i)) / n;
  }
  return d_raw;
}

}  // namespace dcen

#endif  // DCEN_TYPES_HPP_
