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

#ifndef DCEN_DATA_MODEL_HPP_
#define DCEN_DATA_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dcen/image.hpp"
#include "dcen/types.hpp"

namespace dcen {

/// Per-class semantic description vectors, one row per class, values in
/// [0, 1]. Seen and unseen classes share the one attribute space.
struct AttributeMatrix {
  MatXf values;                // (num_classes x attr_dim)
  std::vector<int> class_ids;  // row i describes class_ids[i]

  Index num_classes() const { return values.rows(); }
  Index attr_dim() const { return values.cols(); }

  /// Row index of a class id, or -1 when absent.
  Index row_of(int class_id) const {
    for (std::size_t i = 0; i < class_ids.size(); ++i)
      if (class_ids[i] == class_id) return static_cast<Index>(i);
    return -1;
  }
};

enum class SplitTag : std::uint8_t { kTrain = 0, kVal = 1, kTestSeen = 2, kTestUnseen = 3 };

const char* split_tag_name(SplitTag tag);
bool split_tag_from_name(const std::string& name, SplitTag* out);

/// Sample tensor shape: {H, W, C} in image mode, {D} in feature mode.
struct TensorShape {
  std::vector<Index> dims;

  bool image_mode() const { return dims.size() == 3; }
  Index flat_size() const {
    Index n = 1;
    for (Index d : dims) n *= d;
    return n;
  }
  bool operator==(const TensorShape& o) const { return dims == o.dims; }
};

/// Images (or feature vectors), labels, seen/unseen class split, and the
/// attribute matrix. Immutable after construction; safe to share across
/// threads.
struct GZSLDataset {
  AttributeMatrix attributes;
  MatXf samples;  // one flat HWC row per sample
  std::vector<int> labels;
  std::vector<int> sample_ids;
  std::vector<SplitTag> split;
  std::vector<int> seen_classes;    // sorted
  std::vector<int> unseen_classes;  // sorted
  TensorShape shape;

  Index num_samples() const { return samples.rows(); }
  bool image_mode() const { return shape.image_mode(); }

  std::vector<Index> indices_of(SplitTag tag) const;
  Image sample_image(Index i) const;
};

/// Configuration of the procedural synthetic dataset generator.
struct SynthConfig {
  int num_seen = 8;
  int num_unseen = 4;
  int attr_dim = 16;
  int samples_per_class = 40;
  int image_size = 32;
  float noise_std = 0.05f;
  std::uint64_t seed = 7;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
};

/// Checks every dataset invariant and reports each violation as a
/// human-readable string; nothing is thrown.
ValidationReport validate_dataset(const GZSLDataset& ds);

/// Throws std::invalid_argument naming the violated field.
void validate_synth_config(const SynthConfig& cfg);

/// Deterministic split sizes for a seen class with n samples: 70/10/20.
Index seen_train_count(Index n);
Index seen_val_count(Index n);

}  // namespace dcen

#endif  // DCEN_DATA_MODEL_HPP_
