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

// Small trainable text classifiers used as surrogate and target stand-ins.
// All three read lowercased word tokens and ignore words they never saw in
// training.

#ifndef GREYBOX_BUILTIN_CLASSIFIER_H_
#define GREYBOX_BUILTIN_CLASSIFIER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greybox/corpus.h"
#include "greybox/model.h"

namespace greybox {

enum class BuiltinKind { kNaiveBayes, kLogisticRegression, kHashedPerceptron };

std::string_view KindName(BuiltinKind kind);
// Accepts the canonical names and the short forms nb, lr and perceptron.
BuiltinKind ParseKind(std::string_view name);

struct TrainingOptions {
  // Multinomial naive Bayes, add-alpha smoothing.
  double alpha = 1.0;
  // Softmax regression on word presence, full-batch gradient descent.
  int iterations = 400;
  double learning_rate = 1.0;
  double l2 = 1e-4;
  // Averaged perceptron over hashed unigram and bigram features.
  int epochs = 10;
  int hash_bits = 18;
  std::uint64_t seed = 42;
};

class BuiltinClassifier : public ModelAdapter {
 public:
  // Throws InvalidArgumentError for an empty corpus or fewer than two labels.
  static BuiltinClassifier Train(BuiltinKind kind,
                                 std::span<const LabeledText> corpus,
                                 const TrainingOptions& options);

  // Self-describing JSON tagged with `kind` and a format version.
  std::string Serialize() const;
  // Throws ParseError on malformed or unsupported documents.
  static BuiltinClassifier Deserialize(std::string_view json);

  void Save(const std::filesystem::path& path) const;
  static BuiltinClassifier Load(const std::filesystem::path& path);

  const std::string& name() const override { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  std::vector<std::string> labels() const override { return labels_; }
  LabelDistribution Classify(std::string_view text) const override;

  BuiltinKind kind() const { return kind_; }
  const TrainingOptions& options() const { return options_; }
  // Fraction of examples whose argmax matches the gold label.
  double Accuracy(std::span<const LabeledText> examples) const;

 private:
  BuiltinClassifier() = default;

  std::vector<double> Logits(std::string_view text) const;
  std::vector<std::uint64_t> HashedFeatures(
      const std::vector<std::string>& words) const;
  void PrepareNaiveBayes();

  BuiltinKind kind_ = BuiltinKind::kNaiveBayes;
  std::string name_;
  std::vector<std::string> labels_;  // sorted
  TrainingOptions options_;

  // Naive Bayes and logistic regression.
  std::map<std::string, int> vocabulary_;
  // Naive Bayes: counts per label, derived log-probabilities.
  std::vector<std::int64_t> documents_per_label_;
  std::vector<std::vector<std::int64_t>> word_counts_;
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_likelihood_;
  // Logistic regression: per label, bias followed by one weight per word.
  std::vector<std::vector<double>> weights_;
  // Perceptron: bucket -> per-label averaged weight; bias kept separately.
  std::map<std::uint64_t, std::vector<double>> buckets_;
  std::vector<double> bias_;
};

}  // namespace greybox

#endif  // GREYBOX_BUILTIN_CLASSIFIER_H_
