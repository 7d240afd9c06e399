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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "dcen/data_model.hpp"
#include "dcen/rng.hpp"
#include "dcen/synthetic.hpp"
#include "oracles.hpp"

using namespace dcen;

namespace {

SynthConfig default_cfg() {
  SynthConfig cfg;
  cfg.num_seen = 8;
  cfg.num_unseen = 4;
  cfg.attr_dim = 16;
  cfg.samples_per_class = 40;
  cfg.image_size = 32;
  cfg.noise_std = 0.05f;
  cfg.seed = 7;
  return cfg;
}

bool has_issue_containing(const ValidationReport& rep, const std::string& needle) {
  return std::any_of(rep.issues.begin(), rep.issues.end(), [&needle](const std::string& s) {
    return s.find(needle) != std::string::npos;
  });
}

Index count_tag(const GZSLDataset& ds, SplitTag tag) {
  return static_cast<Index>(ds.indices_of(tag).size());
}

/// Per-cell per-channel mean intensities: the statistics the generator's
/// attribute rendering should make linearly predictive.
MatXd cell_mean_features(const GZSLDataset& ds, const std::vector<Index>& rows, Index grid) {
  const Index size = ds.shape.dims[0];
  MatXd feats(static_cast<Index>(rows.size()), grid * grid * 3 + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Image img = ds.sample_image(rows[r]);
    Index col = 0;
    for (Index gy = 0; gy < grid; ++gy)
      for (Index gx = 0; gx < grid; ++gx) {
        const Index y0 = gy * size / grid, y1 = (gy + 1) * size / grid;
        const Index x0 = gx * size / grid, x1 = (gx + 1) * size / grid;
        for (Index c = 0; c < 3; ++c)
          feats(static_cast<Index>(r), col++) = static_cast<double>(
              img.planes[static_cast<std::size_t>(c)].block(y0, x0, y1 - y0, x1 - x0).mean());
      }
    feats(static_cast<Index>(r), col) = 1.0;  // bias
  }
  return feats;
}

}  // namespace

TEST_CASE("well-formed synthetic dataset validates clean") {
  const GZSLDataset ds = generate_synthetic(default_cfg());
  const ValidationReport rep = validate_dataset(ds);
  CHECK(rep.ok);
  CHECK(rep.issues.empty());
}

TEST_CASE("seen/unseen overlap is reported") {
  GZSLDataset ds = generate_synthetic(default_cfg());
  ds.unseen_classes.push_back(ds.seen_classes.front());
  std::sort(ds.unseen_classes.begin(), ds.unseen_classes.end());
  const ValidationReport rep = validate_dataset(ds);
  CHECK_FALSE(rep.ok);
  CHECK(has_issue_containing(rep, "seen/unseen overlap"));
}

TEST_CASE("a test_unseen sample with a seen label is a split violation") {
  GZSLDataset ds = generate_synthetic(default_cfg());
  // retag one train sample (its label is seen) as test_unseen
  const Index victim = ds.indices_of(SplitTag::kTrain).front();
  ds.split[static_cast<std::size_t>(victim)] = SplitTag::kTestUnseen;
  const ValidationReport rep = validate_dataset(ds);
  CHECK_FALSE(rep.ok);
  CHECK(has_issue_containing(rep, "split violation"));
}

TEST_CASE("ok is false exactly when issues exist") {
  GZSLDataset good = generate_synthetic(default_cfg());
  const ValidationReport r1 = validate_dataset(good);
  CHECK(r1.ok == r1.issues.empty());
  good.labels[0] = 999;  // no attribute row
  const ValidationReport r2 = validate_dataset(good);
  CHECK(r2.ok == r2.issues.empty());
  CHECK_FALSE(r2.ok);
}

TEST_CASE("synthetic counts follow the config") {
  const SynthConfig cfg = default_cfg();
  const GZSLDataset ds = generate_synthetic(cfg);
  CHECK(ds.attributes.num_classes() == 12);
  CHECK(ds.attributes.attr_dim() == 16);
  CHECK(ds.num_samples() == 12 * 40);
  CHECK(count_tag(ds, SplitTag::kTestUnseen) == 4 * 40);

  // 70/10/20 split of each seen class's 40 samples
  CHECK(seen_train_count(40) == 28);
  CHECK(seen_val_count(40) == 4);
  CHECK(count_tag(ds, SplitTag::kTrain) == 8 * 28);
  CHECK(count_tag(ds, SplitTag::kVal) == 8 * 4);
  CHECK(count_tag(ds, SplitTag::kTestSeen) == 8 * 8);
}

TEST_CASE("generation is bit-identical for a fixed seed") {
  const GZSLDataset a = generate_synthetic(default_cfg());
  const GZSLDataset b = generate_synthetic(default_cfg());
  CHECK(a.samples == b.samples);
  CHECK(a.attributes.values == b.attributes.values);
  CHECK(a.labels == b.labels);
  CHECK(a.split == b.split);
}

TEST_CASE("every valid config yields a valid dataset") {
  Rng rng(123);
  for (int trial = 0; trial < 6; ++trial) {
    SynthConfig cfg;
    cfg.num_seen = 2 + static_cast<int>(rng.uniform_int(5));
    cfg.num_unseen = 1 + static_cast<int>(rng.uniform_int(4));
    cfg.attr_dim = 4 + static_cast<int>(rng.uniform_int(20));
    cfg.samples_per_class = 3 + static_cast<int>(rng.uniform_int(12));
    cfg.image_size = 16 + 2 * static_cast<int>(rng.uniform_int(10));
    cfg.noise_std = static_cast<float>(rng.uniform(0.0, 0.2));
    cfg.seed = rng.next_u64();
    const GZSLDataset ds = generate_synthetic(cfg);
    const ValidationReport rep = validate_dataset(ds);
    CHECK(rep.ok);
    CHECK(count_tag(ds, SplitTag::kTrain) ==
          cfg.num_seen * seen_train_count(cfg.samples_per_class));
    CHECK(count_tag(ds, SplitTag::kTestUnseen) == cfg.num_unseen * cfg.samples_per_class);
  }
}

TEST_CASE("config invariant violations throw") {
  SynthConfig cfg = default_cfg();
  cfg.num_seen = 1;
  CHECK_THROWS_AS(generate_synthetic(cfg), std::invalid_argument);
  cfg = default_cfg();
  cfg.attr_dim = 3;
  CHECK_THROWS_AS(generate_synthetic(cfg), std::invalid_argument);
  cfg = default_cfg();
  cfg.image_size = 8;
  CHECK_THROWS_AS(generate_synthetic(cfg), std::invalid_argument);
  cfg = default_cfg();
  cfg.num_unseen = 0;
  CHECK_THROWS_AS(generate_synthetic(cfg), std::invalid_argument);
}

// Frozen one-time oracle outputs for cfg(8,4,16,40,32,noise=0,seed=7),
// ridge 1.0.
constexpr double kProbeErrTrue = 0.058390839941279228;
constexpr double kProbeErrCtrl = 0.11922031125655505;

TEST_CASE("attributes are visibly rendered: linear probe transfers to unseen classes") {
  SynthConfig cfg = default_cfg();
  cfg.noise_std = 0.0f;
  const GZSLDataset ds = generate_synthetic(cfg);

  // noise-free samples of one class differ only by jitter
  const std::vector<Index> train = ds.indices_of(SplitTag::kTrain);
  CHECK(ds.samples.row(train[0]) != ds.samples.row(train[1]));
  CHECK(ds.labels[static_cast<std::size_t>(train[0])] ==
        ds.labels[static_cast<std::size_t>(train[1])]);

  const Index grid =
      static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(cfg.attr_dim))));

  auto targets = [&ds](const std::vector<Index>& rows, const std::vector<int>& class_map) {
    MatXd y(static_cast<Index>(rows.size()), ds.attributes.attr_dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const int label = ds.labels[static_cast<std::size_t>(rows[i])];
      const Index arow = ds.attributes.row_of(class_map.empty() ? label : class_map[static_cast<std::size_t>(label - 8)]);
      y.row(static_cast<Index>(i)) = ds.attributes.values.row(arow).cast<double>();
    }
    return y;
  };

  std::vector<Index> seen_rows;
  for (Index i = 0; i < ds.num_samples(); ++i)
    if (ds.split[static_cast<std::size_t>(i)] != SplitTag::kTestUnseen)
      seen_rows.push_back(i);
  const std::vector<Index> unseen_rows = ds.indices_of(SplitTag::kTestUnseen);

  const MatXd x_seen = cell_mean_features(ds, seen_rows, grid);
  const MatXd x_unseen = cell_mean_features(ds, unseen_rows, grid);
  const MatXd y_seen = targets(seen_rows, {});
  const MatXd y_unseen = targets(unseen_rows, {});

  // control: unseen targets reassigned by a fixed cyclic shuffle of the
  // four unseen classes (8,9,10,11) -> (9,10,11,8)
  const std::vector<int> shuffled_map{9, 10, 11, 8};
  const MatXd y_ctrl = targets(unseen_rows, shuffled_map);

  // Ridge 1.0: with only eight seen classes the 49-feature normal equations
  // are rank-deficient and an unregularized fit does not transfer.
  const double err_true = oracles::linear_probe_error(x_seen, y_seen, x_unseen, y_unseen, 1.0);
  const double err_ctrl = oracles::linear_probe_error(x_seen, y_seen, x_unseen, y_ctrl, 1.0);

  CHECK(err_true < err_ctrl);

  // regression fixture: values recorded from the oracle run on this config
  CHECK(err_true == doctest::Approx(kProbeErrTrue).epsilon(1e-6));
  CHECK(err_ctrl == doctest::Approx(kProbeErrCtrl).epsilon(1e-6));
}
