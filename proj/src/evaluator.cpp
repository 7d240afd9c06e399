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

#include "dcen/evaluator.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace dcen {

double harmonic_mean(double mca_u, double mca_s) {
  if (mca_u + mca_s <= 0.0) return 0.0;
  return 2.0 * mca_u * mca_s / (mca_u + mca_s);
}

double mean_class_accuracy(const std::vector<int>& preds, const std::vector<int>& labels,
                           const std::vector<int>& class_set) {
  if (class_set.empty()) throw std::invalid_argument("mean_class_accuracy: empty class set");
  if (preds.size() != labels.size())
    throw std::invalid_argument("mean_class_accuracy: preds/labels size mismatch");

  std::map<int, std::pair<Index, Index>> counts;  // class -> (correct, total)
  for (int c : class_set) counts[c] = {0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = counts.find(labels[i]);
    if (it == counts.end())
      throw std::invalid_argument("mean_class_accuracy: label " + std::to_string(labels[i]) +
                                  " is not in the class set");
    ++it->second.second;
    if (preds[i] == labels[i]) ++it->second.first;
  }

  double sum = 0.0;
  Index populated = 0;
  for (const auto& [cls, cnt] : counts) {
    if (cnt.second == 0) continue;  // no test samples, excluded from the mean
    sum += 100.0 * static_cast<double>(cnt.first) / static_cast<double>(cnt.second);
    ++populated;
  }
  if (populated == 0) return 0.0;
  return sum / static_cast<double>(populated);
}

std::vector<int> predict(EncoderSet<float>& encoders, const AttributeMatrix& attributes,
                         const MatXf& samples) {
  if (attributes.attr_dim() != encoders.arch.attr_dim)
    throw std::invalid_argument("predict: attribute width does not match the encoder");

  // Class anchors are embedded once per call.
  const ForwardOutput<float> cls =
      semantic_forward(encoders.semantic, attributes.values, nn::Mode::kEval);

  const Index n = samples.rows();
  std::vector<int> preds(static_cast<std::size_t>(n));
  constexpr Index kChunk = 256;
  for (Index start = 0; start < n; start += kChunk) {
    const Index count = std::min(kChunk, n - start);
    const MatXf batch = samples.middleRows(start, count);
    const ForwardOutput<float> vis = visual_forward(encoders.visual, batch, nn::Mode::kEval);
    const MatXf sims = vis.unit * cls.unit.transpose();  // (count x classes)
    for (Index i = 0; i < count; ++i) {
      Index best = 0;
      for (Index c = 1; c < sims.cols(); ++c)
        if (sims(i, c) > sims(i, best)) best = c;  // ties keep the lowest row
      preds[static_cast<std::size_t>(start + i)] =
          attributes.class_ids[static_cast<std::size_t>(best)];
    }
  }
  return preds;
}

GZSLReport evaluate_gzsl(EncoderSet<float>& encoders, const GZSLDataset& ds) {
  const std::vector<Index> seen_idx = ds.indices_of(SplitTag::kTestSeen);
  const std::vector<Index> unseen_idx = ds.indices_of(SplitTag::kTestUnseen);
  if (seen_idx.empty()) throw std::invalid_argument("evaluate_gzsl: empty test_seen split");
  if (unseen_idx.empty()) throw std::invalid_argument("evaluate_gzsl: empty test_unseen split");

  auto gather = [&ds](const std::vector<Index>& idx, MatXf* x, std::vector<int>* y) {
    x->resize(static_cast<Index>(idx.size()), ds.samples.cols());
    y->resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      x->row(static_cast<Index>(i)) = ds.samples.row(idx[i]);
      (*y)[i] = ds.labels[static_cast<std::size_t>(idx[i])];
    }
  };

  MatXf x_seen, x_unseen;
  std::vector<int> y_seen, y_unseen;
  gather(seen_idx, &x_seen, &y_seen);
  gather(unseen_idx, &x_unseen, &y_unseen);

  const std::vector<int> p_seen = predict(encoders, ds.attributes, x_seen);
  const std::vector<int> p_unseen = predict(encoders, ds.attributes, x_unseen);

  GZSLReport rep;
  rep.num_test_seen = static_cast<Index>(seen_idx.size());
  rep.num_test_unseen = static_cast<Index>(unseen_idx.size());
  rep.mca_s = mean_class_accuracy(p_seen, y_seen, ds.seen_classes);
  rep.mca_u = mean_class_accuracy(p_unseen, y_unseen, ds.unseen_classes);
  rep.h = harmonic_mean(rep.mca_u, rep.mca_s);

  auto fill_per_class = [&rep](const std::vector<int>& preds, const std::vector<int>& labels) {
    std::map<int, std::pair<Index, Index>> counts;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto& cnt = counts[labels[i]];
      ++cnt.second;
      if (preds[i] == labels[i]) ++cnt.first;
    }
    for (const auto& [cls, cnt] : counts)
      rep.per_class_acc[cls] =
          100.0 * static_cast<double>(cnt.first) / static_cast<double>(cnt.second);
  };
  fill_per_class(p_seen, y_seen);
  fill_per_class(p_unseen, y_unseen);
  return rep;
}

std::string report_table(const GZSLReport& rep) {
  char line[128];
  std::ostringstream os;
  os << "          MCA_u     MCA_s         H\n";
  std::snprintf(line, sizeof(line), "value   %7.2f   %7.2f   %7.2f\n", rep.mca_u, rep.mca_s,
                rep.h);
  os << line;
  os << "\nper-class accuracy (%):\n";
  for (const auto& [cls, acc] : rep.per_class_acc) {
    std::snprintf(line, sizeof(line), "  class %-6d %6.2f\n", cls, acc);
    os << line;
  }
  std::snprintf(line, sizeof(line), "test samples: seen=%lld unseen=%lld\n",
                static_cast<long long>(rep.num_test_seen),
                static_cast<long long>(rep.num_test_unseen));
  os << line;
  return os.str();
}

std::string report_json(const GZSLReport& rep) {
  nlohmann::json j;
  j["mca_u"] = rep.mca_u;
  j["mca_s"] = rep.mca_s;
  j["h"] = rep.h;
  j["num_test_seen"] = rep.num_test_seen;
  j["num_test_unseen"] = rep.num_test_unseen;
  nlohmann::json per;
  for (const auto& [cls, acc] : rep.per_class_acc) per[std::to_string(cls)] = acc;
  j["per_class_acc"] = per;
  return j.dump(2) + "\n";
}

}  // namespace dcen
