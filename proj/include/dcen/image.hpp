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

#ifndef DCEN_IMAGE_HPP_
#define DCEN_IMAGE_HPP_

#include <vector>

#include "dcen/types.hpp"

namespace dcen {

/// Planar multi-channel image. Each plane is (height x width), values in
/// [0, 1]. Channel count is planes.size().
struct Image {
  std::vector<MatXf> planes;

  Image() = default;
  Image(Index height, Index width, Index channels) {
    planes.assign(static_cast<std::size_t>(channels), MatXf::Zero(height, width));
  }

  Index height() const { return planes.empty() ? 0 : planes[0].rows(); }
  Index width() const { return planes.empty() ? 0 : planes[0].cols(); }
  Index channels() const { return static_cast<Index>(planes.size()); }
};

/// Flat sample layout is HWC row-major: index = (y * W + x) * C + c.
VecXf flatten_hwc(const Image& img);
Image unflatten_hwc(const VecXf& flat, Index height, Index width, Index channels);

/// Bilinear resample to (out_h x out_w) using the half-pixel convention:
/// src = (dst + 0.5) * in/out - 0.5, clamped to the source frame. Equal
/// sizes reproduce the input exactly.
Image resize_bilinear(const Image& img, Index out_h, Index out_w);

/// Clamp every pixel into [0, 1].
void clamp_image(Image& img);

}  // namespace dcen

#endif  // DCEN_IMAGE_HPP_
