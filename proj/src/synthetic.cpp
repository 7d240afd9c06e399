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

#include "dcen/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "dcen/rng.hpp"

namespace dcen {

namespace {

struct CellRect {
  Index y0, x0, y1, x1;  // half-open
};

CellRect cell_rect(Index grid, Index size, Index row, Index col) {
  CellRect r;
  r.y0 = row * size / grid;
  r.y1 = (row + 1) * size / grid;
  r.x0 = col * size / grid;
  r.x1 = (col + 1) * size / grid;
  return r;
}

/// Renders one sample. Jitter offsets shift the cell contents by at most one
/// pixel; drawing clips at the image border.
Image render_sample(const RowX<float>& attrs, Index size, float noise_std, Rng& rng) {
  const Index d = attrs.size();
  const Index grid = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(d))));
  Image img(size, size, 3);

  const int dx = static_cast<int>(rng.uniform_int(3)) - 1;
  const int dy = static_cast<int>(rng.uniform_int(3)) - 1;
  const float brightness = static_cast<float>(rng.uniform(0.9, 1.1));

  for (Index j = 0; j < d; ++j) {
    const float a = attrs[j];
    const CellRect r = cell_rect(grid, size, j / grid, j % grid);
    const Index ch = (j / 3) % 3;
    MatXf& plane = img.planes[static_cast<std::size_t>(ch)];
    const Index cw = r.x1 - r.x0;
    const Index chh = r.y1 - r.y0;

    switch (j % 3) {
      case 0: {  // uniform fill
        for (Index y = r.y0; y < r.y1; ++y)
          for (Index x = r.x0; x < r.x1; ++x) {
            const Index yy = y + dy, xx = x + dx;
            if (yy >= 0 && yy < size && xx >= 0 && xx < size) plane(yy, xx) = a;
          }
        break;
      }
      case 1: {  // vertical stripes
        const float freq = 1.0f + 3.0f * a;
        for (Index y = r.y0; y < r.y1; ++y)
          for (Index x = r.x0; x < r.x1; ++x) {
            const Index yy = y + dy, xx = x + dx;
            if (yy < 0 || yy >= size || xx < 0 || xx >= size) continue;
            const float u = static_cast<float>(x - r.x0) / static_cast<float>(cw);
            const float v =
                a * (0.5f + 0.5f * std::sin(2.0f * static_cast<float>(std::numbers::pi) * freq * u));
            plane(yy, xx) = v;
          }
        break;
      }
      case 2: {  // disk
        const float radius = (0.1f + 0.4f * a) * static_cast<float>(std::min(cw, chh));
        const float cy = static_cast<float>(r.y0 + r.y1 - 1) / 2.0f + static_cast<float>(dy);
        const float cx = static_cast<float>(r.x0 + r.x1 - 1) / 2.0f + static_cast<float>(dx);
        for (Index y = r.y0; y < r.y1; ++y)
          for (Index x = r.x0; x < r.x1; ++x) {
            const Index yy = y + dy, xx = x + dx;
            if (yy < 0 || yy >= size || xx < 0 || xx >= size) continue;
            const float ddy = static_cast<float>(yy) - cy;
            const float ddx = static_cast<float>(xx) - cx;
            if (ddy * ddy + ddx * ddx <= radius * radius) plane(yy, xx) = 0.9f;
          }
        break;
      }
    }
  }

  for (MatXf& plane : img.planes) plane *= brightness;
  if (noise_std > 0.0f) {
    for (MatXf& plane : img.planes)
      for (Index y = 0; y < size; ++y)
        for (Index x = 0; x < size; ++x)
          plane(y, x) += noise_std * static_cast<float>(rng.normal());
  }
  clamp_image(img);
  return img;
}

}  // namespace

GZSLDataset generate_synthetic(const SynthConfig& cfg) {
  validate_synth_config(cfg);
  Rng rng(cfg.seed);

  const Index num_classes = cfg.num_seen + cfg.num_unseen;
  const Index d = cfg.attr_dim;
  const Index size = cfg.image_size;
  const Index per_class = cfg.samples_per_class;

  GZSLDataset ds;
  ds.shape.dims = {size, size, 3};
  ds.attributes.values.resize(num_classes, d);
  ds.attributes.class_ids.resize(static_cast<std::size_t>(num_classes));
  for (Index c = 0; c < num_classes; ++c) {
    ds.attributes.class_ids[static_cast<std::size_t>(c)] = static_cast<int>(c);
    for (Index j = 0; j < d; ++j)
      ds.attributes.values(c, j) = static_cast<float>(rng.uniform());
  }
  for (int c = 0; c < cfg.num_seen; ++c) ds.seen_classes.push_back(c);
  for (int c = cfg.num_seen; c < static_cast<int>(num_classes); ++c) ds.unseen_classes.push_back(c);

  const Index total = num_classes * per_class;
  ds.samples.resize(total, size * size * 3);
  ds.labels.resize(static_cast<std::size_t>(total));
  ds.sample_ids.resize(static_cast<std::size_t>(total));
  ds.split.resize(static_cast<std::size_t>(total));

  const Index n_train = seen_train_count(per_class);
  const Index n_val = seen_val_count(per_class);

  Index row = 0;
  for (Index c = 0; c < num_classes; ++c) {
    const bool is_seen = c < cfg.num_seen;
    for (Index s = 0; s < per_class; ++s, ++row) {
      const Image img = render_sample(ds.attributes.values.row(c), size, cfg.noise_std, rng);
      ds.samples.row(row) = flatten_hwc(img).transpose();
      ds.labels[static_cast<std::size_t>(row)] = static_cast<int>(c);
      ds.sample_ids[static_cast<std::size_t>(row)] = static_cast<int>(row);
      SplitTag tag;
      if (!is_seen) tag = SplitTag::kTestUnseen;
      else if (s < n_train) tag = SplitTag::kTrain;
      else if (s < n_train + n_val) tag = SplitTag::kVal;
      else tag = SplitTag::kTestSeen;
      ds.split[static_cast<std::size_t>(row)] = tag;
    }
  }
  return ds;
}

}  // namespace dcen
