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

// Query-only classifier contract shared by the explainer, the attack engine
// and the reports. Adapters are immutable after construction and must allow
// concurrent Classify calls.

#ifndef GREYBOX_MODEL_H_
#define GREYBOX_MODEL_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace greybox {

inline constexpr double kDistributionTolerance = 1e-6;

class LabelDistribution {
 public:
  LabelDistribution() = default;

  // Validates distinct labels, scores in [0, 1] and a sum of 1 within
  // kDistributionTolerance. Throws InvalidArgumentError.
  LabelDistribution(std::vector<std::string> labels,
                    std::vector<double> scores);

  // Normalizes non-negative weights into a distribution.
  static LabelDistribution FromWeights(std::vector<std::string> labels,
                                       std::vector<double> weights);
  // Softmax over raw scores.
  static LabelDistribution FromLogits(std::vector<std::string> labels,
                                      const std::vector<double>& logits);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& scores() const { return scores_; }

  // Highest score; exact ties go to the lexicographically smallest label.
  std::size_t argmax() const;
  const std::string& label() const { return labels_[argmax()]; }
  double confidence() const { return scores_[argmax()]; }

  bool has_label(std::string_view label) const;
  // Throws InvalidArgumentError for an unknown label.
  double score_of(std::string_view label) const;

  friend bool operator==(const LabelDistribution&,
                         const LabelDistribution&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> scores_;
};

class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  virtual const std::string& name() const = 0;
  virtual std::vector<std::string> labels() const = 0;
  // Pure query. Remote adapters throw QueryFailure subclasses.
  virtual LabelDistribution Classify(std::string_view text) const = 0;
};

// Returns the same distribution for every input.
class ConstantModel : public ModelAdapter {
 public:
  ConstantModel(std::string name, LabelDistribution distribution)
      : name_(std::move(name)), distribution_(std::move(distribution)) {}

  const std::string& name() const override { return name_; }
  std::vector<std::string> labels() const override {
    return distribution_.labels();
  }
  LabelDistribution Classify(std::string_view) const override {
    return distribution_;
  }

 private:
  std::string name_;
  LabelDistribution distribution_;
};

// Adapts a callable. The callable must be thread-safe.
class CallbackModel : public ModelAdapter {
 public:
  using Fn = std::function<LabelDistribution(std::string_view)>;

  CallbackModel(std::string name, std::vector<std::string> labels, Fn fn)
      : name_(std::move(name)), labels_(std::move(labels)), fn_(std::move(fn)) {}

  const std::string& name() const override { return name_; }
  std::vector<std::string> labels() const override { return labels_; }
  LabelDistribution Classify(std::string_view text) const override;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  Fn fn_;
};

}  // namespace greybox

#endif  // GREYBOX_MODEL_H_
