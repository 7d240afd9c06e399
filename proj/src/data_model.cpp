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

#include "dcen/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dcen {

const char* split_tag_name(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain: return "train";
    case SplitTag::kVal: return "val";
    case SplitTag::kTestSeen: return "test_seen";
    case SplitTag::kTestUnseen: return "test_unseen";
  }
  return "?";
}

bool split_tag_from_name(const std::string& name, SplitTag* out) {
  if (name == "train") *out = SplitTag::kTrain;
  else if (name == "val") *out = SplitTag::kVal;
  else if (name == "test_seen") *out = SplitTag::kTestSeen;
  else if (name == "test_unseen") *out = SplitTag::kTestUnseen;
  else return false;
  return true;
}

std::vector<Index> GZSLDataset::indices_of(SplitTag tag) const {
  std::vector<Index> idx;
  for (std::size_t i = 0; i < split.size(); ++i)
    if (split[i] == tag) idx.push_back(static_cast<Index>(i));
  return idx;
}

Image GZSLDataset::sample_image(Index i) const {
  if (!image_mode()) throw std::logic_error("sample_image: dataset is in feature mode");
  return unflatten_hwc(samples.row(i).transpose(), shape.dims[0], shape.dims[1], shape.dims[2]);
}

Index seen_train_count(Index n) { return static_cast<Index>(std::floor(0.7 * static_cast<double>(n))); }
Index seen_val_count(Index n) { return static_cast<Index>(std::floor(0.1 * static_cast<double>(n))); }

namespace {

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace

ValidationReport validate_dataset(const GZSLDataset& ds) {
  ValidationReport rep;
  auto issue = [&rep](std::string msg) {
    rep.ok = false;
    rep.issues.push_back(std::move(msg));
  };

  const std::set<int> seen(ds.seen_classes.begin(), ds.seen_classes.end());
  const std::set<int> unseen(ds.unseen_classes.begin(), ds.unseen_classes.end());

  for (int c : ds.seen_classes)
    if (unseen.count(c)) issue(cat("seen/unseen overlap: class ", c, " is in both sets"));

  // Attribute matrix invariants.
  const MatXf& a = ds.attributes.values;
  if (static_cast<Index>(ds.attributes.class_ids.size()) != a.rows())
    issue("attribute matrix: class_ids size does not match row count");
  for (Index i = 0; i < a.rows(); ++i) {
    if (a.row(i).isZero(0.0f))
      issue(cat("attribute matrix: row for class ", ds.attributes.class_ids[i], " is all-zero"));
    if (a.row(i).minCoeff() < 0.0f || a.row(i).maxCoeff() > 1.0f)
      issue(cat("attribute matrix: row for class ", ds.attributes.class_ids[i],
                " has values outside [0,1]"));
    for (Index j = i + 1; j < a.rows(); ++j)
      if (a.row(i) == a.row(j))
        issue(cat("attribute matrix: rows for classes ", ds.attributes.class_ids[i], " and ",
                  ds.attributes.class_ids[j], " are identical"));
  }

  // Every registered class needs an attribute row.
  for (int c : ds.seen_classes)
    if (ds.attributes.row_of(c) < 0) issue(cat("seen class ", c, " has no attribute row"));
  for (int c : ds.unseen_classes)
    if (ds.attributes.row_of(c) < 0) issue(cat("unseen class ", c, " has no attribute row"));

  const Index n = ds.num_samples();
  if (static_cast<Index>(ds.labels.size()) != n) issue("labels size does not match sample count");
  if (static_cast<Index>(ds.split.size()) != n) issue("split size does not match sample count");
  if (static_cast<Index>(ds.sample_ids.size()) != n)
    issue("sample_ids size does not match sample count");
  if (ds.samples.cols() != ds.shape.flat_size())
    issue("sample row width does not match declared tensor shape");

  const Index limit = std::min<Index>(n, static_cast<Index>(ds.labels.size()));
  for (Index i = 0; i < limit && i < static_cast<Index>(ds.split.size()); ++i) {
    const int y = ds.labels[i];
    if (ds.attributes.row_of(y) < 0)
      issue(cat("sample ", i, ": label ", y, " has no attribute row"));
    switch (ds.split[i]) {
      case SplitTag::kTrain:
      case SplitTag::kVal:
      case SplitTag::kTestSeen:
        if (!seen.count(y))
          issue(cat("split violation: sample ", i, " tagged ", split_tag_name(ds.split[i]),
                    " but label ", y, " is not a seen class"));
        break;
      case SplitTag::kTestUnseen:
        if (!unseen.count(y))
          issue(cat("split violation: sample ", i, " tagged test_unseen but label ", y,
                    " is not an unseen class"));
        break;
    }
  }

  if (ds.image_mode() && n > 0) {
    if (ds.samples.minCoeff() < 0.0f || ds.samples.maxCoeff() > 1.0f)
      issue("image values outside [0,1]");
  }

  return rep;
}

void validate_synth_config(const SynthConfig& cfg) {
  if (cfg.num_seen < 2) throw std::invalid_argument("synth config: num_seen must be >= 2");
  if (cfg.num_unseen < 1) throw std::invalid_argument("synth config: num_unseen must be >= 1");
  if (cfg.attr_dim < 4) throw std::invalid_argument("synth config: attr_dim must be >= 4");
  if (cfg.image_size < 16) throw std::invalid_argument("synth config: image_size must be >= 16");
  if (cfg.samples_per_class < 1)
    throw std::invalid_argument("synth config: samples_per_class must be >= 1");
  if (cfg.noise_std < 0.0f) throw std::invalid_argument("synth config: noise_std must be >= 0");
}

}  // namespace dcen
