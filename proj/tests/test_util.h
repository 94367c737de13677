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

#ifndef GREYBOX_TESTS_TEST_UTIL_H_
#define GREYBOX_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "greybox/model.h"
#include "greybox/random.h"
#include "greybox/text.h"

namespace greybox::testing {

inline const std::vector<std::string> kBinary = {"negative", "positive"};

// Positive with probability sigmoid(sum of weights of present words).
class WordWeightModel : public ModelAdapter {
 public:
  WordWeightModel(std::string name,
                  std::vector<std::pair<std::string, double>> weights,
                  double bias = 0.0)
      : name_(std::move(name)), weights_(std::move(weights)), bias_(bias) {}

  const std::string& name() const override { return name_; }
  std::vector<std::string> labels() const override { return kBinary; }
  LabelDistribution Classify(std::string_view text) const override {
    ++calls_;
    double z = bias_;
    for (const auto& w : Tokenize(text).words()) {
      const std::string lower = AsciiLower(w);
      for (const auto& [word, weight] : weights_) {
        if (word == lower) z += weight;
      }
    }
    const double p = 1.0 / (1.0 + std::exp(-z));
    return LabelDistribution(kBinary, {1.0 - p, p});
  }
  int calls() const { return calls_; }

 private:
  std::string name_;
  std::vector<std::pair<std::string, double>> weights_;
  double bias_;
  mutable std::atomic<int> calls_{0};
};

// Random strings mixing ASCII words, punctuation, whitespace runs, multi-byte
// UTF-8 and, unless `valid_only`, occasional invalid bytes.
inline std::string RandomText(Rng& rng, int max_len = 40, bool valid_only = false) {
  static const std::vector<std::string> kPieces = {
      "a", "Poor", "don't", "x9", " ", "  ", "\t", "\n", ".", ",", "!", "'",
      "\xE2\x80\x99", "\xD1\x96", "caf\xC3\xA9", "\xE2\x80\x94", "\xF0\x9F\x98\x80",
      "\xFF", "\xC3", "\"", "-", "12", "\xE4\xB8\xAD\xE6\x96\x87"};
  const int n = static_cast<int>(UniformBelow(rng, max_len + 1));
  std::string out;
  for (int i = 0; i < n; ++i) {
    const std::string& piece = kPieces[UniformBelow(rng, kPieces.size())];
    if (valid_only && (piece == "\xFF" || piece == "\xC3")) continue;
    out += piece;
  }
  return out;
}

}  // namespace greybox::testing

#endif  // GREYBOX_TESTS_TEST_UTIL_H_
