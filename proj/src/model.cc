//
// Copyright 2026 The Greybox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "greybox/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "greybox/errors.h"

namespace greybox {

LabelDistribution::LabelDistribution(std::vector<std::string> labels,
                                     std::vector<double> scores)
    : labels_(std::move(labels)), scores_(std::move(scores)) {
  if (labels_.empty()) throw InvalidArgumentError("no labels");
  if (labels_.size() != scores_.size()) {
    throw InvalidArgumentError("got " + std::to_string(labels_.size()) +
                               " labels but " +
                               std::to_string(scores_.size()) + " scores");
  }
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() !=
      labels_.size()) {
    throw InvalidArgumentError("duplicate label");
  }
  double sum = 0.0;
  for (double s : scores_) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw InvalidArgumentError("score " + std::to_string(s) +
                                 " outside [0, 1]");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance) {
    throw InvalidArgumentError("scores sum to " + std::to_string(sum));
  }
}

LabelDistribution LabelDistribution::FromWeights(std::vector<std::string> labels,
                                                 std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw InvalidArgumentError("weights sum to zero");
  for (double& w : weights) w /= total;
  return LabelDistribution(std::move(labels), std::move(weights));
}

LabelDistribution LabelDistribution::FromLogits(
    std::vector<std::string> labels, const std::vector<double>& logits) {
  if (logits.empty()) throw InvalidArgumentError("no logits");
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> weights(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    weights[i] = std::exp(logits[i] - top);
  }
  return FromWeights(std::move(labels), std::move(weights));
}

std::size_t LabelDistribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores_.size(); ++i) {
    if (scores_[i] > scores_[best] ||
        (scores_[i] == scores_[best] && labels_[i] < labels_[best])) {
      best = i;
    }
  }
  return best;
}

bool LabelDistribution::has_label(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

double LabelDistribution::score_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw InvalidArgumentError("unknown label '" + std::string(label) + "'");
  }
  return scores_[it - labels_.begin()];
}

LabelDistribution CallbackModel::Classify(std::string_view text) const {
  return fn_(text);
}

}  // namespace greybox
