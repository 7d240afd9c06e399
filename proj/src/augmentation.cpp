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

#include "dcen/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dcen {

namespace {

constexpr const char* kOpNames[] = {"crop", "flip", "gray", "color_jitter",
                                    "blur", "rotation", "swap"};

bool known_op(const std::string& name) {
  for (const char* n : kOpNames)
    if (name == n) return true;
  return false;
}

Index reflect101(Index i, Index n) {
  // Mirror without repeating the edge pixel: -1 -> 1, n -> n-2.
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

float luminance(float r, float g, float b) { return 0.299f * r + 0.587f * g + 0.114f * b; }

void rgb_to_hsv(float r, float g, float b, float* h, float* s, float* v) {
  const float mx = std::max({r, g, b});
  const float mn = std::min({r, g, b});
  const float d = mx - mn;
  *v = mx;
  *s = mx > 0.0f ? d / mx : 0.0f;
  if (d <= 0.0f) {
    *h = 0.0f;
    return;
  }
  float hh;
  if (mx == r) hh = (g - b) / d;
  else if (mx == g) hh = 2.0f + (b - r) / d;
  else hh = 4.0f + (r - g) / d;
  hh /= 6.0f;
  if (hh < 0.0f) hh += 1.0f;
  *h = hh;
}

void hsv_to_rgb(float h, float s, float v, float* r, float* g, float* b) {
  if (s <= 0.0f) {
    *r = *g = *b = v;
    return;
  }
  h = h - std::floor(h);
  const float hh = h * 6.0f;
  const int sector = std::min(5, static_cast<int>(hh));
  const float f = hh - static_cast<float>(sector);
  const float p = v * (1.0f - s);
  const float q = v * (1.0f - s * f);
  const float t = v * (1.0f - s * (1.0f - f));
  switch (sector) {
    case 0: *r = v; *g = t; *b = p; break;
    case 1: *r = q; *g = v; *b = p; break;
    case 2: *r = p; *g = v; *b = t; break;
    case 3: *r = p; *g = q; *b = v; break;
    case 4: *r = t; *g = p; *b = v; break;
    default: *r = v; *g = p; *b = q; break;
  }
}

void require_rgb(const Image& img, const char* op) {
  if (img.channels() != 3)
    throw std::invalid_argument(std::string(op) + " requires a 3-channel image");
}

}  // namespace

void validate_augmentation_spec(const AugmentationSpec& spec) {
  if (spec.out_size < 1) throw std::invalid_argument("augmentation: out_size must be >= 1");
  for (const AugOp& op : spec.ops) {
    if (!known_op(op.name)) throw std::invalid_argument("augmentation: unknown op '" + op.name + "'");
    if (op.prob < 0.0 || op.prob > 1.0)
      throw std::invalid_argument("augmentation: probability of '" + op.name + "' outside [0,1]");
    if (op.name == "crop" && !(op.scale_lo > 0.0 && op.scale_lo <= op.scale_hi && op.scale_hi <= 1.0))
      throw std::invalid_argument("augmentation: crop scale range must satisfy 0 < lo <= hi <= 1");
    if (op.name == "blur" && !(op.sigma_lo > 0.0 && op.sigma_lo <= op.sigma_hi))
      throw std::invalid_argument("augmentation: blur sigma range must satisfy 0 < lo <= hi");
    if (op.name == "rotation" && op.max_angle_deg < 0.0)
      throw std::invalid_argument("augmentation: rotation max angle must be >= 0");
    if (op.name == "swap" && op.grid_n < 2)
      throw std::invalid_argument("augmentation: swap grid must be >= 2");
    if (op.name == "color_jitter") {
      if (op.brightness < 0.0 || op.contrast < 0.0 || op.saturation < 0.0)
        throw std::invalid_argument("augmentation: jitter strengths must be >= 0");
      if (op.hue < 0.0 || op.hue > 1.0)
        throw std::invalid_argument("augmentation: hue strength outside [0,1]");
    }
  }
}

AugmentationSpec default_augmentation_spec(Index out_size) {
  AugmentationSpec spec;
  spec.out_size = out_size;
  AugOp crop{.name = "crop", .prob = 1.0, .scale_lo = 0.2, .scale_hi = 1.0};
  AugOp flip{.name = "flip", .prob = 0.5};
  AugOp blur{.name = "blur", .prob = 0.5, .sigma_lo = 0.1, .sigma_hi = 2.0};
  AugOp rot{.name = "rotation", .prob = 0.5, .max_angle_deg = 30.0};
  AugOp swap{.name = "swap", .prob = 0.2, .grid_n = 3};
  spec.ops = {crop, flip, blur, rot, swap};
  return spec;
}

namespace {

struct Preset {
  const char* name;
  bool crop, flip, gray;
  int jitter;    // 0 none, 1..3 strength variant
  bool blur;
  int rot_deg;   // 0 none
  int swap_n;    // 0 none
};

// One row per pipeline variant, from bare resize to the full retained set.
constexpr Preset kPresets[] = {
    {"none", false, false, false, 0, false, 0, 0},
    {"crop", true, false, false, 0, false, 0, 0},
    {"crop_flip", true, true, false, 0, false, 0, 0},
    {"crop_flip_gray", true, true, true, 0, false, 0, 0},
    {"crop_flip_cj_v1", true, true, false, 1, false, 0, 0},
    {"crop_flip_cj_v2", true, true, false, 2, false, 0, 0},
    {"crop_flip_cj_v3", true, true, false, 3, false, 0, 0},
    {"crop_flip_blur", true, true, false, 0, true, 0, 0},
    {"crop_flip_rot90", true, true, false, 0, false, 90, 0},
    {"crop_flip_rot60", true, true, false, 0, false, 60, 0},
    {"crop_flip_rot30", true, true, false, 0, false, 30, 0},
    {"crop_flip_swap7", true, true, false, 0, false, 0, 7},
    {"crop_flip_swap5", true, true, false, 0, false, 0, 5},
    {"crop_flip_swap3", true, true, false, 0, false, 0, 3},
    {"crop_flip_blur_rot30", true, true, false, 0, true, 30, 0},
    {"crop_flip_blur_rot30_swap3", true, true, false, 0, true, 30, 3},
};

}  // namespace

int augmentation_preset_count() { return static_cast<int>(std::size(kPresets)); }

std::string augmentation_preset_name(int row) {
  if (row < 0 || row >= augmentation_preset_count())
    throw std::invalid_argument("augmentation preset index out of range: " + std::to_string(row));
  return kPresets[row].name;
}

AugmentationSpec augmentation_preset(int row, Index out_size) {
  if (row < 0 || row >= augmentation_preset_count())
    throw std::invalid_argument("augmentation preset index out of range: " + std::to_string(row));
  const Preset& p = kPresets[row];
  AugmentationSpec spec;
  spec.out_size = out_size;
  if (p.crop) spec.ops.push_back({.name = "crop", .prob = 1.0, .scale_lo = 0.2, .scale_hi = 1.0});
  if (p.flip) spec.ops.push_back({.name = "flip", .prob = 0.5});
  if (p.gray) spec.ops.push_back({.name = "gray", .prob = 0.2});
  if (p.jitter > 0) {
    AugOp cj{.name = "color_jitter", .prob = 0.8};
    if (p.jitter == 1) { cj.brightness = 0.4; cj.contrast = 0.4; cj.saturation = 0.4; cj.hue = 0.4; }
    if (p.jitter == 2) { cj.brightness = 0.4; cj.contrast = 0.4; cj.saturation = 0.4; cj.hue = 0.1; }
    if (p.jitter == 3) { cj.brightness = 0.8; cj.contrast = 0.8; cj.saturation = 0.8; cj.hue = 0.2; }
    spec.ops.push_back(cj);
  }
  if (p.blur) spec.ops.push_back({.name = "blur", .prob = 0.5, .sigma_lo = 0.1, .sigma_hi = 2.0});
  if (p.rot_deg > 0)
    spec.ops.push_back({.name = "rotation", .prob = 0.5, .max_angle_deg = static_cast<double>(p.rot_deg)});
  if (p.swap_n > 0) spec.ops.push_back({.name = "swap", .prob = 0.2, .grid_n = p.swap_n});
  return spec;
}

Image random_resized_crop(const Image& img, double scale_lo, double scale_hi, Index out_size,
                          Rng& rng) {
  if (!(scale_lo > 0.0 && scale_lo <= scale_hi && scale_hi <= 1.0))
    throw std::invalid_argument("random_resized_crop: need 0 < lo <= hi <= 1");
  const Index h = img.height(), w = img.width();
  const double area = rng.uniform(scale_lo, scale_hi);
  const double side = std::sqrt(area);
  const Index ch = static_cast<Index>(std::llround(static_cast<double>(h) * side));
  const Index cw = static_cast<Index>(std::llround(static_cast<double>(w) * side));
  if (ch < 1 || cw < 1)
    throw std::invalid_argument("random_resized_crop: crop window smaller than 1 pixel");
  const Index y0 = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(h - ch + 1)));
  const Index x0 = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(w - cw + 1)));

  Image crop(ch, cw, img.channels());
  for (Index c = 0; c < img.channels(); ++c)
    crop.planes[static_cast<std::size_t>(c)] = img.planes[static_cast<std::size_t>(c)].block(y0, x0, ch, cw);
  Image out = resize_bilinear(crop, out_size, out_size);
  clamp_image(out);
  return out;
}

Image horizontal_flip(const Image& img) {
  Image out = img;
  for (MatXf& p : out.planes) p = p.rowwise().reverse().eval();
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("gaussian_blur: sigma must be > 0");
  const Index radius = static_cast<Index>(std::ceil(3.0 * sigma));
  VecXf kernel(2 * radius + 1);
  for (Index k = -radius; k <= radius; ++k)
    kernel[k + radius] =
        static_cast<float>(std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma)));
  kernel /= kernel.sum();

  const Index h = img.height(), w = img.width();
  Image out(h, w, img.channels());
  MatXf tmp(h, w);
  for (Index c = 0; c < img.channels(); ++c) {
    const MatXf& src = img.planes[static_cast<std::size_t>(c)];
    // horizontal pass
    for (Index y = 0; y < h; ++y)
      for (Index x = 0; x < w; ++x) {
        float acc = 0.0f;
        for (Index k = -radius; k <= radius; ++k)
          acc += kernel[k + radius] * src(y, reflect101(x + k, w));
        tmp(y, x) = acc;
      }
    // vertical pass
    MatXf& dst = out.planes[static_cast<std::size_t>(c)];
    for (Index y = 0; y < h; ++y)
      for (Index x = 0; x < w; ++x) {
        float acc = 0.0f;
        for (Index k = -radius; k <= radius; ++k)
          acc += kernel[k + radius] * tmp(reflect101(y + k, h), x);
        dst(y, x) = acc;
      }
  }
  clamp_image(out);
  return out;
}

Image rotate(const Image& img, double angle_deg, double max_abs_deg) {
  if (std::abs(angle_deg) > max_abs_deg)
    throw std::invalid_argument("rotate: |angle| exceeds the configured maximum");
  const Index h = img.height(), w = img.width();
  const double rad = angle_deg * std::numbers::pi / 180.0;
  const float cs = static_cast<float>(std::cos(rad));
  const float sn = static_cast<float>(std::sin(rad));
  const float cy = static_cast<float>(h - 1) / 2.0f;
  const float cx = static_cast<float>(w - 1) / 2.0f;

  Image out(h, w, img.channels());
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x) {
      // inverse rotation of the output grid
      const float dy = static_cast<float>(y) - cy;
      const float dx = static_cast<float>(x) - cx;
      const float sy = cy + (sn * dx + cs * dy);
      const float sx = cx + (cs * dx - sn * dy);
      if (sy < 0.0f || sy > static_cast<float>(h - 1) || sx < 0.0f || sx > static_cast<float>(w - 1))
        continue;  // zero fill
      const Index y0 = static_cast<Index>(sy), x0 = static_cast<Index>(sx);
      const Index y1 = std::min(y0 + 1, h - 1), x1 = std::min(x0 + 1, w - 1);
      const float wy = sy - static_cast<float>(y0), wx = sx - static_cast<float>(x0);
      for (Index c = 0; c < img.channels(); ++c) {
        const MatXf& p = img.planes[static_cast<std::size_t>(c)];
        const float top = p(y0, x0) * (1.0f - wx) + p(y0, x1) * wx;
        const float bot = p(y1, x0) * (1.0f - wx) + p(y1, x1) * wx;
        out.planes[static_cast<std::size_t>(c)](y, x) = top * (1.0f - wy) + bot * wy;
      }
    }
  clamp_image(out);
  return out;
}

Image patch_swap(const Image& img, int grid_n, Rng& rng) {
  if (grid_n < 2) throw std::invalid_argument("patch_swap: grid must be >= 2");
  const Index h = img.height(), w = img.width();
  const Index g = grid_n;
  const Index ph = (h + g - 1) / g, pw = (w + g - 1) / g;  // padded tile size
  const Index hp = ph * g, wp = pw * g;

  // Edge-replicate pad when the side is not divisible, crop back afterwards.
  Image padded(hp, wp, img.channels());
  for (Index c = 0; c < img.channels(); ++c) {
    const MatXf& src = img.planes[static_cast<std::size_t>(c)];
    MatXf& dst = padded.planes[static_cast<std::size_t>(c)];
    for (Index y = 0; y < hp; ++y)
      for (Index x = 0; x < wp; ++x) dst(y, x) = src(std::min(y, h - 1), std::min(x, w - 1));
  }

  std::vector<Index> perm(static_cast<std::size_t>(g * g));
  std::iota(perm.begin(), perm.end(), Index{0});
  rng.shuffle(perm);

  Image shuffled(hp, wp, img.channels());
  for (Index t = 0; t < g * g; ++t) {
    const Index sy = (perm[static_cast<std::size_t>(t)] / g) * ph;
    const Index sx = (perm[static_cast<std::size_t>(t)] % g) * pw;
    const Index dy = (t / g) * ph;
    const Index dx = (t % g) * pw;
    for (Index c = 0; c < img.channels(); ++c)
      shuffled.planes[static_cast<std::size_t>(c)].block(dy, dx, ph, pw) =
          padded.planes[static_cast<std::size_t>(c)].block(sy, sx, ph, pw);
  }

  if (hp == h && wp == w) return shuffled;
  Image out(h, w, img.channels());
  for (Index c = 0; c < img.channels(); ++c)
    out.planes[static_cast<std::size_t>(c)] = shuffled.planes[static_cast<std::size_t>(c)].block(0, 0, h, w);
  return out;
}

Image to_grayscale(const Image& img) {
  require_rgb(img, "to_grayscale");
  Image out(img.height(), img.width(), 3);
  MatXf lum = 0.299f * img.planes[0] + 0.587f * img.planes[1] + 0.114f * img.planes[2];
  out.planes[0] = lum;
  out.planes[1] = lum;
  out.planes[2] = std::move(lum);
  return out;
}

Image color_jitter(const Image& img, double brightness, double contrast, double saturation,
                   double hue, Rng& rng) {
  require_rgb(img, "color_jitter");
  if (brightness < 0.0 || contrast < 0.0 || saturation < 0.0)
    throw std::invalid_argument("color_jitter: strengths must be >= 0");
  if (hue < 0.0 || hue > 1.0) throw std::invalid_argument("color_jitter: hue outside [0,1]");

  const float fb = static_cast<float>(rng.uniform(std::max(0.0, 1.0 - brightness), 1.0 + brightness));
  const float fc = static_cast<float>(rng.uniform(std::max(0.0, 1.0 - contrast), 1.0 + contrast));
  const float fs = static_cast<float>(rng.uniform(std::max(0.0, 1.0 - saturation), 1.0 + saturation));
  const float dh = static_cast<float>(rng.uniform(-hue, hue));

  Image out = img;
  if (brightness > 0.0) {
    for (MatXf& p : out.planes) p *= fb;
    clamp_image(out);
  }
  if (contrast > 0.0) {
    const float mean =
        (0.299f * out.planes[0] + 0.587f * out.planes[1] + 0.114f * out.planes[2]).mean();
    for (MatXf& p : out.planes) p = (p.array() - mean) * fc + mean;
    clamp_image(out);
  }
  if (saturation > 0.0) {
    MatXf lum = 0.299f * out.planes[0] + 0.587f * out.planes[1] + 0.114f * out.planes[2];
    for (MatXf& p : out.planes) p = lum + fs * (p - lum);
    clamp_image(out);
  }
  if (hue > 0.0) {
    for (Index y = 0; y < out.height(); ++y)
      for (Index x = 0; x < out.width(); ++x) {
        float hh, ss, vv;
        rgb_to_hsv(out.planes[0](y, x), out.planes[1](y, x), out.planes[2](y, x), &hh, &ss, &vv);
        hh += dh;
        hsv_to_rgb(hh, ss, vv, &out.planes[0](y, x), &out.planes[1](y, x), &out.planes[2](y, x));
      }
    clamp_image(out);
  }
  return out;
}

Image apply_pipeline(const Image& img, const AugmentationSpec& spec, Rng& rng,
                     std::vector<bool>* fired) {
  if (fired) fired->assign(spec.ops.size(), false);
  Image cur = img;
  for (std::size_t i = 0; i < spec.ops.size(); ++i) {
    const AugOp& op = spec.ops[i];
    const bool fire = rng.uniform() < op.prob;
    if (fired) (*fired)[i] = fire;
    if (!fire) continue;
    if (op.name == "crop") {
      cur = random_resized_crop(cur, op.scale_lo, op.scale_hi, spec.out_size, rng);
    } else if (op.name == "flip") {
      cur = horizontal_flip(cur);
    } else if (op.name == "gray") {
      cur = to_grayscale(cur);
    } else if (op.name == "color_jitter") {
      cur = color_jitter(cur, op.brightness, op.contrast, op.saturation, op.hue, rng);
    } else if (op.name == "blur") {
      const double sigma = rng.uniform(op.sigma_lo, op.sigma_hi);
      cur = gaussian_blur(cur, sigma);
    } else if (op.name == "rotation") {
      const double angle = rng.uniform(-op.max_angle_deg, op.max_angle_deg);
      cur = rotate(cur, angle, op.max_angle_deg);
    } else if (op.name == "swap") {
      cur = patch_swap(cur, op.grid_n, rng);
    } else {
      throw std::invalid_argument("augmentation: unknown op '" + op.name + "'");
    }
  }
  if (cur.height() != spec.out_size || cur.width() != spec.out_size) {
    cur = resize_bilinear(cur, spec.out_size, spec.out_size);
    clamp_image(cur);
  }
  return cur;
}

std::pair<Image, Image> two_views(const Image& img, const AugmentationSpec& spec, Rng& rng) {
  Image v1 = apply_pipeline(img, spec, rng);
  Image v2 = apply_pipeline(img, spec, rng);
  return {std::move(v1), std::move(v2)};
}

}  // namespace dcen
