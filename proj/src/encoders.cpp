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

#include "dcen/encoders.hpp"

namespace dcen {

void validate_arch_config(const ArchConfig& arch) {
  if (arch.backbone != "small_conv" && arch.backbone != "mlp_on_features")
    throw std::invalid_argument("arch: unknown backbone '" + arch.backbone + "'");
  if (arch.backbone == "small_conv") {
    if (arch.image_size < 8) throw std::invalid_argument("arch: image_size must be >= 8");
    if (arch.image_channels < 1) throw std::invalid_argument("arch: image_channels must be >= 1");
    if (arch.conv_widths.empty()) throw std::invalid_argument("arch: conv_widths must be non-empty");
    for (Index w : arch.conv_widths)
      if (w < 1) throw std::invalid_argument("arch: conv widths must be positive");
    if (arch.head_pool != "gap" && arch.head_pool != "flatten")
      throw std::invalid_argument("arch: head_pool must be 'gap' or 'flatten'");
  } else {
    if (arch.feature_dim < 1)
      throw std::invalid_argument("arch: feature_dim must be >= 1 in mlp_on_features mode");
    if (arch.mlp_hidden < 1) throw std::invalid_argument("arch: mlp_hidden must be >= 1");
  }
  if (arch.embed_dim < 1) throw std::invalid_argument("arch: embed_dim must be >= 1");
  if (arch.attr_dim < 1) throw std::invalid_argument("arch: attr_dim must be >= 1");
  if (arch.depth_k < 1) throw std::invalid_argument("arch: K must be >= 1");
  if (!(arch.bn_momentum > 0.0 && arch.bn_momentum <= 1.0))
    throw std::invalid_argument("arch: bn_momentum must lie in (0,1]");
}

}  // namespace dcen
