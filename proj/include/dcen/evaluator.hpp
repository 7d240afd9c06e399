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

#ifndef DCEN_EVALUATOR_HPP_
#define DCEN_EVALUATOR_HPP_

#include <map>
#include <string>
#include <vector>

#include "dcen/data_model.hpp"
#include "dcen/encoders.hpp"

namespace dcen {

/// Mean class accuracies (percent) per domain plus their harmonic mean.
struct GZSLReport {
  double mca_u = 0.0;
  double mca_s = 0.0;
  double h = 0.0;
  std::map<int, double> per_class_acc;  // percent, classes with test samples
  Index num_test_seen = 0;
  Index num_test_unseen = 0;
};

/// H = 2 * mca_u * mca_s / (mca_u + mca_s); 0 when both inputs are 0.
double harmonic_mean(double mca_u, double mca_s);

/// Class-balanced top-1 accuracy in percent over class_set; classes without
/// test samples are excluded from the mean. Throws on an empty class_set or
/// a label outside it.
double mean_class_accuracy(const std::vector<int>& preds, const std::vector<int>& labels,
                           const std::vector<int>& class_set);

/// Nearest-neighbour prediction over all attribute rows: for each sample,
/// argmin over classes of -cos(f(x), h(a_y)) on unit embeddings, ties broken
/// by the lowest attribute-row index. Encoders run in eval mode with
/// unmasked attributes.
std::vector<int> predict(EncoderSet<float>& encoders, const AttributeMatrix& attributes,
                         const MatXf& samples);

/// Scores test_seen and test_unseen over the union label space. Throws when
/// either test split is empty.
GZSLReport evaluate_gzsl(EncoderSet<float>& encoders, const GZSLDataset& ds);

std::string report_table(const GZSLReport& rep);
std::string report_json(const GZSLReport& rep);

}  // namespace dcen

#endif  // DCEN_EVALUATOR_HPP_
