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

#ifndef DCEN_AUGMENTATION_HPP_
#define DCEN_AUGMENTATION_HPP_

#include <string>
#include <utility>
#include <vector>

#include "dcen/image.hpp"
#include "dcen/rng.hpp"

namespace dcen {

/// One entry of the augmentation pipeline. Which parameter fields apply
/// depends on `name`; unused fields are ignored.
struct AugOp {
  std::string name;   // crop | flip | gray | color_jitter | blur | rotation | swap
  double prob = 1.0;  // probability the op fires per view

  double scale_lo = 0.2, scale_hi = 1.0;  // crop: area fraction range
  double sigma_lo = 0.1, sigma_hi = 2.0;  // blur: sigma drawn uniformly
  double max_angle_deg = 30.0;            // rotation: angle drawn from [-max, max]
  int grid_n = 3;                         // swap: jigsaw grid
  // color_jitter strengths; hue must lie in [0, 1]
  double brightness = 0.0, contrast = 0.0, saturation = 0.0, hue = 0.0;
};

/// Ordered op list plus the output side length. Ops execute in list order;
/// if the result is not out_size x out_size a final bilinear resize is
/// applied (only relevant for specs without a crop op).
struct AugmentationSpec {
  std::vector<AugOp> ops;
  Index out_size = 32;
};

/// Throws std::invalid_argument on out-of-range probabilities or parameters,
/// or unknown op names.
void validate_augmentation_spec(const AugmentationSpec& spec);

/// The retained pipeline: crop p=1.0 (0.2,1.0), flip p=0.5, blur p=0.5,
/// rotation(30) p=0.5, swap(3) p=0.2.
AugmentationSpec default_augmentation_spec(Index out_size = 32);

/// Named pipeline presets indexed 0..15, from bare resize through the full
/// retained pipeline, adding one op variant at a time (gray, three jitter
/// strengths, three rotation limits, three jigsaw sizes, blur combos).
int augmentation_preset_count();
std::string augmentation_preset_name(int row);
AugmentationSpec augmentation_preset(int row, Index out_size = 32);

// --- individual ops -------------------------------------------------------

/// Crop with area fraction drawn uniformly from [scale_lo, scale_hi], aspect
/// ratio preserved, position uniform; bilinear resize to out_size. Throws if
/// the window would round below one pixel.
Image random_resized_crop(const Image& img, double scale_lo, double scale_hi, Index out_size,
                          Rng& rng);

Image horizontal_flip(const Image& img);

/// Separable Gaussian, kernel radius ceil(3*sigma), reflect-101 padding.
Image gaussian_blur(const Image& img, double sigma);

/// Rotation about the image center, bilinear sampling, zeros outside the
/// frame. |angle_deg| must not exceed max_abs_deg.
Image rotate(const Image& img, double angle_deg, double max_abs_deg = 30.0);

/// Partitions into grid_n x grid_n tiles and permutes them uniformly. Sides
/// not divisible by grid_n are edge-padded to the next multiple and cropped
/// back afterwards.
Image patch_swap(const Image& img, int grid_n, Rng& rng);

/// Rec.601 luminance replicated across the three channels.
Image to_grayscale(const Image& img);

/// Sequential brightness/contrast/saturation/hue perturbation. Factor f for
/// strength s is drawn from [max(0, 1-s), 1+s]; the hue shift is drawn from
/// [-hue, hue] turns. hue must lie in [0, 1].
Image color_jitter(const Image& img, double brightness, double contrast, double saturation,
                   double hue, Rng& rng);

// --- pipeline -------------------------------------------------------------

/// Applies the spec once. `fired`, when non-null, receives one flag per op
/// telling whether it fired.
Image apply_pipeline(const Image& img, const AugmentationSpec& spec, Rng& rng,
                     std::vector<bool>* fired = nullptr);

/// Two independent draws of the same spec.
std::pair<Image, Image> two_views(const Image& img, const AugmentationSpec& spec, Rng& rng);

}  // namespace dcen

#endif  // DCEN_AUGMENTATION_HPP_
