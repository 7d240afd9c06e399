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

#ifndef DCEN_SYNTHETIC_HPP_
#define DCEN_SYNTHETIC_HPP_

#include "dcen/data_model.hpp"

namespace dcen {

/// Procedural attribute-conditioned dataset generator.
///
/// Each class draws one attribute row uniformly from [0,1]^D and keeps it
/// fixed. Images are rendered on a G x G cell grid (G = ceil(sqrt(D))); the
/// j-th attribute owns cell (j / G, j % G) and controls one visible property
/// there, cycling through three kinds:
///   j % 3 == 0  uniform fill whose intensity is a_j,
///   j % 3 == 1  vertical sine stripes whose frequency and amplitude grow
///               with a_j,
///   j % 3 == 2  a disk whose radius grows with a_j.
/// The written channel is (j / 3) % 3. Per-sample jitter (one-pixel content
/// offset and a global brightness factor in [0.9, 1.1]) provides intra-class
/// variation; Gaussian pixel noise of std noise_std is added on top and the
/// result is clamped to [0, 1].
///
/// Classes 0..num_seen-1 are seen, the rest unseen. Seen-class samples split
/// 70/10/20 into train/val/test_seen in generation order; unseen classes
/// contribute only test_unseen samples. Deterministic given cfg.seed.
GZSLDataset generate_synthetic(const SynthConfig& cfg);

}  // namespace dcen

#endif  // DCEN_SYNTHETIC_HPP_
