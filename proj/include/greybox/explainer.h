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

// Local linear explanations of a text classifier.
//
// Words are switched off at random, the model is queried on each perturbed
// sentence, samples are weighted by their closeness to the original and a
// weighted ridge regression of the target-label probability on the word
// masks gives one signed contribution per word.

#ifndef GREYBOX_EXPLAINER_H_
#define GREYBOX_EXPLAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greybox/model.h"
#include "greybox/text.h"

namespace greybox {

struct ExplainerConfig {
  int num_samples = 1000;
  double kernel_width = 25.0;
  double ridge_lambda = 1.0;
  std::uint64_t seed = 42;
  // Label whose probability is regressed. Defaults to the model's prediction
  // on the unperturbed text.
  std::optional<std::string> target_label;
  // Concurrent model queries while scoring the perturbation batch.
  int parallelism = 1;
};

struct Explanation {
  std::vector<std::string> words;
  std::vector<double> contributions;  // one per word
  double intercept = 0.0;
  std::string predicted_label;
  double predicted_confidence = 0.0;
  std::string target_label;
  // Word indices by descending contribution, ties by ascending index.
  std::vector<int> ranked;
  // Every perturbed sample produced the same target probability.
  bool degenerate = false;
  int queries = 0;
};

// First mask keeps every word. Each further mask drops k words, k uniform in
// [1, W], at k distinct uniform positions. Throws InvalidArgumentError for
// W = 0.
std::vector<PerturbationMask> SampleMasks(int word_count,
                                          const ExplainerConfig& config);

// All 2^W masks in counting order, starting from all-ones. W <= 24.
std::vector<PerturbationMask> EnumerateMasks(int word_count);

// exp(-d^2 / width^2) with d the cosine distance to the all-ones mask.
double ProximityWeight(const PerturbationMask& mask, double kernel_width);

struct RidgeFit {
  double intercept = 0.0;
  std::vector<double> coefficients;
};

// Minimizes sum_i w_i (y_i - b0 - b.m_i)^2 + lambda |b|^2 (intercept not
// penalized) through the normal equations and a Cholesky factorization.
// Throws NumericalError when the system is not positive definite.
RidgeFit FitWeightedRidge(std::span<const PerturbationMask> masks,
                          std::span<const double> targets,
                          std::span<const double> weights, double lambda);

std::vector<int> RankByContribution(std::span<const double> contributions);

Explanation Explain(std::string_view text, const ModelAdapter& model,
                    const ExplainerConfig& config);

// Same as Explain over a caller-supplied mask set; config.num_samples and
// config.seed are ignored.
Explanation ExplainWithMasks(std::string_view text, const ModelAdapter& model,
                             std::span<const PerturbationMask> masks,
                             const ExplainerConfig& config);

}  // namespace greybox

#endif  // GREYBOX_EXPLAINER_H_
