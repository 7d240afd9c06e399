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

#include "dcen/image.hpp"

#include <algorithm>
#include <cmath>

namespace dcen {

VecXf flatten_hwc(const Image& img) {
  const Index h = img.height(), w = img.width(), c = img.channels();
  VecXf flat(h * w * c);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x)
      for (Index ch = 0; ch < c; ++ch) flat[(y * w + x) * c + ch] = img.planes[ch](y, x);
  return flat;
}

Image unflatten_hwc(const VecXf& flat, Index height, Index width, Index channels) {
  if (flat.size() != height * width * channels)
    throw std::invalid_argument("unflatten_hwc: flat size does not match shape");
  Image img(height, width, channels);
  for (Index y = 0; y < height; ++y)
    for (Index x = 0; x < width; ++x)
      for (Index ch = 0; ch < channels; ++ch)
        img.planes[ch](y, x) = flat[(y * width + x) * channels + ch];
  return img;
}

Image resize_bilinear(const Image& img, Index out_h, Index out_w) {
  const Index in_h = img.height(), in_w = img.width(), c = img.channels();
  if (in_h < 1 || in_w < 1) throw std::invalid_argument("resize_bilinear: empty input");
  Image out(out_h, out_w, c);
  const float sy = static_cast<float>(in_h) / static_cast<float>(out_h);
  const float sx = static_cast<float>(in_w) / static_cast<float>(out_w);
  for (Index y = 0; y < out_h; ++y) {
    float fy = (static_cast<float>(y) + 0.5f) * sy - 0.5f;
    fy = std::min(std::max(fy, 0.0f), static_cast<float>(in_h - 1));
    const Index y0 = static_cast<Index>(fy);
    const Index y1 = std::min(y0 + 1, in_h - 1);
    const float wy = fy - static_cast<float>(y0);
    for (Index x = 0; x < out_w; ++x) {
      float fx = (static_cast<float>(x) + 0.5f) * sx - 0.5f;
      fx = std::min(std::max(fx, 0.0f), static_cast<float>(in_w - 1));
      const Index x0 = static_cast<Index>(fx);
      const Index x1 = std::min(x0 + 1, in_w - 1);
      const float wx = fx - static_cast<float>(x0);
      for (Index ch = 0; ch < c; ++ch) {
        const MatXf& p = img.planes[ch];
        const float top = p(y0, x0) * (1.0f - wx) + p(y0, x1) * wx;
        const float bot = p(y1, x0) * (1.0f - wx) + p(y1, x1) * wx;
        out.planes[ch](y, x) = top * (1.0f - wy) + bot * wy;
      }
    }
  }
  return out;
}

void clamp_image(Image& img) {
  for (MatXf& p : img.planes) p = p.cwiseMax(0.0f).cwiseMin(1.0f);
}

}  // namespace dcen
