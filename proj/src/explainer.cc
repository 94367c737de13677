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

#include "greybox/explainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "greybox/errors.h"
#include "greybox/parallel.h"
#include "greybox/random.h"

namespace greybox {

std::vector<PerturbationMask> SampleMasks(int word_count,
                                          const ExplainerConfig& config) {
  if (word_count <= 0) {
    throw InvalidArgumentError("cannot sample masks for a sentence without words");
  }
  if (config.num_samples < 1) {
    throw InvalidArgumentError("num_samples must be positive");
  }
  Rng rng(config.seed);
  std::vector<PerturbationMask> masks;
  masks.reserve(config.num_samples);
  masks.push_back(PerturbationMask::AllOnes(word_count));
  std::vector<int> positions(word_count);
  for (int s = 1; s < config.num_samples; ++s) {
    const int drop = 1 + static_cast<int>(UniformBelow(rng, word_count));
    std::iota(positions.begin(), positions.end(), 0);
    PerturbationMask mask = PerturbationMask::AllOnes(word_count);
    for (int j = 0; j < drop; ++j) {
      const auto pick = j + static_cast<int>(UniformBelow(rng, word_count - j));
      std::swap(positions[j], positions[pick]);
      mask.set(positions[j], false);
    }
    masks.push_back(std::move(mask));
  }
  return masks;
}

std::vector<PerturbationMask> EnumerateMasks(int word_count) {
  if (word_count <= 0 || word_count > 24) {
    throw InvalidArgumentError("mask enumeration needs 1 <= W <= 24");
  }
  const std::uint64_t total = std::uint64_t{1} << word_count;
  std::vector<PerturbationMask> masks;
  masks.reserve(total);
  for (std::uint64_t code = 0; code < total; ++code) {
    // code 0 is all-ones: bit j set means word j removed.
    std::vector<std::uint8_t> bits(word_count);
    for (int j = 0; j < word_count; ++j) bits[j] = ((code >> j) & 1) ? 0 : 1;
    masks.emplace_back(std::move(bits));
  }
  return masks;
}

double ProximityWeight(const PerturbationMask& mask, double kernel_width) {
  if (!(kernel_width > 0.0)) {
    throw InvalidArgumentError("kernel width must be positive");
  }
  if (mask.size() == 0) throw InvalidArgumentError("empty mask");
  const double kept = mask.kept_count();
  // Cosine distance to all-ones; the all-zeros mask sits at distance 1.
  const double distance = 1.0 - std::sqrt(kept / mask.size());
  return std::exp(-(distance * distance) / (kernel_width * kernel_width));
}

RidgeFit FitWeightedRidge(std::span<const PerturbationMask> masks,
                          std::span<const double> targets,
                          std::span<const double> weights, double lambda) {
  if (masks.empty()) throw InvalidArgumentError("no samples");
  if (targets.size() != masks.size() || weights.size() != masks.size()) {
    throw LengthMismatchError("masks, targets and weights differ in length");
  }
  if (lambda < 0.0) throw InvalidArgumentError("ridge lambda must be >= 0");
  const int features = masks.front().size();
  const int dim = features + 1;  // column 0 is the intercept

  // Normal equations (X^T W X + lambda P) b = X^T W y, row-major.
  std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
  std::vector<double> rhs(dim, 0.0);
  std::vector<double> row(dim);
  for (std::size_t s = 0; s < masks.size(); ++s) {
    if (masks[s].size() != features) {
      throw LengthMismatchError("masks differ in length");
    }
    const double w = weights[s];
    row[0] = 1.0;
    for (int j = 0; j < features; ++j) row[j + 1] = masks[s].kept(j) ? 1.0 : 0.0;
    for (int r = 0; r < dim; ++r) {
      if (row[r] == 0.0) continue;
      const double wr = w * row[r];
      rhs[r] += wr * targets[s];
      for (int c = 0; c <= r; ++c) a[r * dim + c] += wr * row[c];
    }
  }
  for (int j = 1; j < dim; ++j) a[j * dim + j] += lambda;

  // In-place Cholesky: lower triangle of `a` becomes L with A = L L^T.
  double scale = 0.0;
  for (int j = 0; j < dim; ++j) scale = std::max(scale, a[j * dim + j]);
  for (int j = 0; j < dim; ++j) {
    double diag = a[j * dim + j];
    for (int k = 0; k < j; ++k) diag -= a[j * dim + k] * a[j * dim + k];
    if (!(diag > 1e-13 * scale)) {
      throw NumericalError(
          "weighted ridge system is singular; raise ridge_lambda or the "
          "sample count");
    }
    const double ljj = std::sqrt(diag);
    a[j * dim + j] = ljj;
    for (int i = j + 1; i < dim; ++i) {
      double v = a[i * dim + j];
      for (int k = 0; k < j; ++k) v -= a[i * dim + k] * a[j * dim + k];
      a[i * dim + j] = v / ljj;
    }
  }
  std::vector<double> z(dim);
  for (int i = 0; i < dim; ++i) {
    double v = rhs[i];
    for (int k = 0; k < i; ++k) v -= a[i * dim + k] * z[k];
    z[i] = v / a[i * dim + i];
  }
  std::vector<double> beta(dim);
  for (int i = dim - 1; i >= 0; --i) {
    double v = z[i];
    for (int k = i + 1; k < dim; ++k) v -= a[k * dim + i] * beta[k];
    beta[i] = v / a[i * dim + i];
  }

  RidgeFit fit;
  fit.intercept = beta[0];
  fit.coefficients.assign(beta.begin() + 1, beta.end());
  return fit;
}

std::vector<int> RankByContribution(std::span<const double> contributions) {
  std::vector<int> order(contributions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return contributions[lhs] > contributions[rhs];
  });
  return order;
}

Explanation Explain(std::string_view text, const ModelAdapter& model,
                    const ExplainerConfig& config) {
  const TokenizedText tokens = Tokenize(text);
  const int words = tokens.word_count();
  if (words == 0) throw InvalidArgumentError("sentence has no words");
  if (config.num_samples < words + 2) {
    throw InvalidArgumentError(
        "num_samples " + std::to_string(config.num_samples) +
        " is below W + 2 = " + std::to_string(words + 2));
  }
  return ExplainWithMasks(text, model, SampleMasks(words, config), config);
}

Explanation ExplainWithMasks(std::string_view text, const ModelAdapter& model,
                             std::span<const PerturbationMask> masks,
                             const ExplainerConfig& config) {
  const TokenizedText tokens = Tokenize(text);
  const int words = tokens.word_count();
  if (words == 0) throw InvalidArgumentError("sentence has no words");
  if (masks.empty()) throw InvalidArgumentError("no masks");

  Explanation result;
  result.words = tokens.words();

  const LabelDistribution original = model.Classify(text);
  result.predicted_label = original.label();
  result.predicted_confidence = original.confidence();
  result.target_label = config.target_label.value_or(result.predicted_label);
  if (!original.has_label(result.target_label)) {
    throw InvalidArgumentError("model '" + model.name() + "' has no label '" +
                               result.target_label + "'");
  }

  // Identical perturbed strings are queried once; results are indexed so the
  // fit does not depend on completion order.
  std::vector<std::string> unique_texts;
  std::unordered_map<std::string, std::size_t> slot_of;
  std::vector<std::size_t> slot(masks.size());
  const std::string original_text(text);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    std::string perturbed = ApplyMask(tokens, masks[i]);
    auto [it, inserted] = slot_of.emplace(perturbed, unique_texts.size());
    if (inserted) unique_texts.push_back(std::move(perturbed));
    slot[i] = it->second;
  }
  std::vector<double> probability(unique_texts.size());
  std::vector<std::size_t> pending;
  for (std::size_t u = 0; u < unique_texts.size(); ++u) {
    if (unique_texts[u] == original_text) {
      probability[u] = original.score_of(result.target_label);
    } else {
      pending.push_back(u);
    }
  }
  ParallelFor(pending.size(), config.parallelism, [&](std::size_t j) {
    const std::size_t u = pending[j];
    probability[u] = model.Classify(unique_texts[u]).score_of(result.target_label);
  });
  result.queries = 1 + static_cast<int>(pending.size());

  std::vector<double> targets(masks.size());
  std::vector<double> weights(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (masks[i].size() != words) {
      throw LengthMismatchError("mask length differs from word count");
    }
    targets[i] = probability[slot[i]];
    weights[i] = ProximityWeight(masks[i], config.kernel_width);
  }

  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  if (*lo == *hi) {
    result.degenerate = true;
    result.contributions.assign(words, 0.0);
    result.intercept = *lo;
  } else {
    RidgeFit fit = FitWeightedRidge(masks, targets, weights, config.ridge_lambda);
    result.contributions = std::move(fit.coefficients);
    result.intercept = fit.intercept;
  }
  result.ranked = RankByContribution(result.contributions);
  return result;
}

}  // namespace greybox
