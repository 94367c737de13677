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

#include "greybox/builtin_classifier.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "greybox/errors.h"
#include "greybox/random.h"
#include "greybox/text.h"
#include "json.hpp"

namespace greybox {
namespace {

constexpr int kFormatVersion = 1;
constexpr char kFormatTag[] = "greybox-model";

std::vector<std::string> Words(std::string_view text) {
  std::vector<std::string> words = Tokenize(text).words();
  for (auto& w : words) w = AsciiLower(w);
  return words;
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::size_t ArgmaxFirst(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) -
                                  v.begin());
}

}  // namespace

std::string_view KindName(BuiltinKind kind) {
  switch (kind) {
    case BuiltinKind::kNaiveBayes:
      return "naive-bayes";
    case BuiltinKind::kLogisticRegression:
      return "logistic-regression";
    case BuiltinKind::kHashedPerceptron:
      return "hashed-bigram-perceptron";
  }
  return "unknown";
}

BuiltinKind ParseKind(std::string_view name) {
  if (name == "naive-bayes" || name == "nb") return BuiltinKind::kNaiveBayes;
  if (name == "logistic-regression" || name == "lr") {
    return BuiltinKind::kLogisticRegression;
  }
  if (name == "hashed-bigram-perceptron" || name == "perceptron") {
    return BuiltinKind::kHashedPerceptron;
  }
  throw InvalidArgumentError("unknown classifier kind '" + std::string(name) +
                             "'");
}

BuiltinClassifier BuiltinClassifier::Train(BuiltinKind kind,
                                           std::span<const LabeledText> corpus,
                                           const TrainingOptions& options) {
  if (corpus.empty()) throw InvalidArgumentError("empty training corpus");
  std::set<std::string> label_set;
  for (const auto& example : corpus) label_set.insert(example.label);
  if (label_set.size() < 2) {
    throw InvalidArgumentError("training corpus needs at least two labels");
  }
  if (options.alpha <= 0.0 || options.iterations < 0 ||
      options.learning_rate <= 0.0 || options.l2 < 0.0 || options.epochs < 0 ||
      options.hash_bits < 4 || options.hash_bits > 24) {
    throw InvalidArgumentError("invalid training options");
  }

  BuiltinClassifier model;
  model.kind_ = kind;
  model.name_ = std::string(KindName(kind));
  model.options_ = options;
  model.labels_.assign(label_set.begin(), label_set.end());
  const std::size_t classes = model.labels_.size();

  std::vector<std::size_t> gold(corpus.size());
  std::vector<std::vector<std::string>> docs(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    gold[i] = std::lower_bound(model.labels_.begin(), model.labels_.end(),
                               corpus[i].label) -
              model.labels_.begin();
    docs[i] = Words(corpus[i].text);
  }

  if (kind != BuiltinKind::kHashedPerceptron) {
    for (const auto& doc : docs) {
      for (const auto& w : doc) model.vocabulary_.emplace(w, 0);
    }
    int next = 0;
    for (auto& [_, index] : model.vocabulary_) index = next++;
  }
  const std::size_t vocab = model.vocabulary_.size();

  switch (kind) {
    case BuiltinKind::kNaiveBayes: {
      model.documents_per_label_.assign(classes, 0);
      model.word_counts_.assign(classes, std::vector<std::int64_t>(vocab, 0));
      for (std::size_t i = 0; i < docs.size(); ++i) {
        ++model.documents_per_label_[gold[i]];
        for (const auto& w : docs[i]) {
          ++model.word_counts_[gold[i]][model.vocabulary_.at(w)];
        }
      }
      model.PrepareNaiveBayes();
      break;
    }
    case BuiltinKind::kLogisticRegression: {
      Rng rng(options.seed);
      model.weights_.assign(classes, std::vector<double>(vocab + 1));
      for (auto& row : model.weights_) {
        for (double& w : row) w = (UniformUnit(rng) - 0.5) * 0.02;
      }
      std::vector<std::vector<int>> features(docs.size());
      for (std::size_t i = 0; i < docs.size(); ++i) {
        std::set<int> present;
        for (const auto& w : docs[i]) present.insert(model.vocabulary_.at(w) + 1);
        features[i].assign(present.begin(), present.end());
      }
      const double inv_n = 1.0 / static_cast<double>(docs.size());
      std::vector<std::vector<double>> grad(classes,
                                            std::vector<double>(vocab + 1));
      std::vector<double> logits(classes);
      for (int it = 0; it < options.iterations; ++it) {
        for (auto& row : grad) std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t i = 0; i < docs.size(); ++i) {
          for (std::size_t c = 0; c < classes; ++c) {
            double z = model.weights_[c][0];
            for (int f : features[i]) z += model.weights_[c][f];
            logits[c] = z;
          }
          const double top = *std::max_element(logits.begin(), logits.end());
          double total = 0.0;
          for (double& z : logits) total += (z = std::exp(z - top));
          for (std::size_t c = 0; c < classes; ++c) {
            const double residual =
                (logits[c] / total - (c == gold[i] ? 1.0 : 0.0)) * inv_n;
            grad[c][0] += residual;
            for (int f : features[i]) grad[c][f] += residual;
          }
        }
        for (std::size_t c = 0; c < classes; ++c) {
          auto& w = model.weights_[c];
          w[0] -= options.learning_rate * grad[c][0];
          for (std::size_t f = 1; f <= vocab; ++f) {
            w[f] -= options.learning_rate * (grad[c][f] + options.l2 * w[f]);
          }
        }
      }
      break;
    }
    case BuiltinKind::kHashedPerceptron: {
      const std::size_t buckets = std::size_t{1} << options.hash_bits;
      std::vector<std::vector<std::uint64_t>> features(docs.size());
      for (std::size_t i = 0; i < docs.size(); ++i) {
        features[i] = model.HashedFeatures(docs[i]);
      }
      // Averaged perceptron: avg = w - u / c.
      std::vector<double> w(buckets * classes, 0.0), u(buckets * classes, 0.0);
      std::vector<double> bw(classes, 0.0), bu(classes, 0.0);
      std::vector<std::size_t> order(docs.size());
      std::iota(order.begin(), order.end(), 0);
      Rng rng(options.seed);
      double step = 1.0;
      std::vector<double> scores(classes);
      for (int epoch = 0; epoch < options.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
          std::swap(order[i - 1], order[UniformBelow(rng, i)]);
        }
        for (std::size_t idx : order) {
          for (std::size_t c = 0; c < classes; ++c) {
            double s = bw[c];
            for (auto f : features[idx]) s += w[f * classes + c];
            scores[c] = s;
          }
          const std::size_t predicted = ArgmaxFirst(scores);
          const std::size_t truth = gold[idx];
          if (predicted != truth) {
            for (auto f : features[idx]) {
              w[f * classes + truth] += 1.0;
              u[f * classes + truth] += step;
              w[f * classes + predicted] -= 1.0;
              u[f * classes + predicted] -= step;
            }
            bw[truth] += 1.0;
            bu[truth] += step;
            bw[predicted] -= 1.0;
            bu[predicted] -= step;
          }
          step += 1.0;
        }
      }
      model.bias_.resize(classes);
      for (std::size_t c = 0; c < classes; ++c) {
        model.bias_[c] = bw[c] - bu[c] / step;
      }
      for (std::size_t b = 0; b < buckets; ++b) {
        std::vector<double> row(classes);
        bool nonzero = false;
        for (std::size_t c = 0; c < classes; ++c) {
          row[c] = w[b * classes + c] - u[b * classes + c] / step;
          nonzero = nonzero || row[c] != 0.0;
        }
        if (nonzero) model.buckets_.emplace(b, std::move(row));
      }
      break;
    }
  }
  return model;
}

void BuiltinClassifier::PrepareNaiveBayes() {
  const std::size_t classes = labels_.size();
  const std::size_t vocab = vocabulary_.size();
  const double total_docs = std::accumulate(documents_per_label_.begin(),
                                            documents_per_label_.end(), 0.0);
  log_prior_.resize(classes);
  log_likelihood_.assign(classes, std::vector<double>(vocab));
  for (std::size_t c = 0; c < classes; ++c) {
    log_prior_[c] = std::log(documents_per_label_[c] / total_docs);
    const double total_words = std::accumulate(
        word_counts_[c].begin(), word_counts_[c].end(), 0.0);
    const double denominator = total_words + options_.alpha * vocab;
    for (std::size_t v = 0; v < vocab; ++v) {
      log_likelihood_[c][v] =
          std::log((word_counts_[c][v] + options_.alpha) / denominator);
    }
  }
}

std::vector<std::uint64_t> BuiltinClassifier::HashedFeatures(
    const std::vector<std::string>& words) const {
  const std::uint64_t mask = (std::uint64_t{1} << options_.hash_bits) - 1;
  std::vector<std::uint64_t> out;
  out.reserve(words.size() * 2);
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.push_back(Fnv1a("u\x1f" + words[i]) & mask);
    if (i + 1 < words.size()) {
      out.push_back(Fnv1a("b\x1f" + words[i] + "\x1f" + words[i + 1]) & mask);
    }
  }
  return out;
}

std::vector<double> BuiltinClassifier::Logits(std::string_view text) const {
  const std::vector<std::string> words = Words(text);
  const std::size_t classes = labels_.size();
  std::vector<double> logits(classes, 0.0);
  switch (kind_) {
    case BuiltinKind::kNaiveBayes:
      logits = log_prior_;
      for (const auto& w : words) {
        auto it = vocabulary_.find(w);
        if (it == vocabulary_.end()) continue;
        for (std::size_t c = 0; c < classes; ++c) {
          logits[c] += log_likelihood_[c][it->second];
        }
      }
      break;
    case BuiltinKind::kLogisticRegression: {
      std::set<int> present;
      for (const auto& w : words) {
        auto it = vocabulary_.find(w);
        if (it != vocabulary_.end()) present.insert(it->second + 1);
      }
      for (std::size_t c = 0; c < classes; ++c) {
        logits[c] = weights_[c][0];
        for (int f : present) logits[c] += weights_[c][f];
      }
      break;
    }
    case BuiltinKind::kHashedPerceptron:
      logits = bias_;
      for (auto f : HashedFeatures(words)) {
        auto it = buckets_.find(f);
        if (it == buckets_.end()) continue;
        for (std::size_t c = 0; c < classes; ++c) logits[c] += it->second[c];
      }
      break;
  }
  return logits;
}

LabelDistribution BuiltinClassifier::Classify(std::string_view text) const {
  return LabelDistribution::FromLogits(labels_, Logits(text));
}

double BuiltinClassifier::Accuracy(std::span<const LabeledText> examples) const {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& example : examples) {
    if (Classify(example.text).label() == example.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

std::string BuiltinClassifier::Serialize() const {
  nlohmann::json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kFormatVersion;
  doc["kind"] = std::string(KindName(kind_));
  doc["name"] = name_;
  doc["labels"] = labels_;
  doc["options"] = {{"alpha", options_.alpha},
                    {"iterations", options_.iterations},
                    {"learning_rate", options_.learning_rate},
                    {"l2", options_.l2},
                    {"epochs", options_.epochs},
                    {"hash_bits", options_.hash_bits},
                    {"seed", options_.seed}};
  switch (kind_) {
    case BuiltinKind::kNaiveBayes: {
      std::vector<std::string> vocab;
      for (const auto& [word, _] : vocabulary_) vocab.push_back(word);
      doc["vocabulary"] = vocab;
      doc["documents_per_label"] = documents_per_label_;
      doc["word_counts"] = word_counts_;
      break;
    }
    case BuiltinKind::kLogisticRegression: {
      std::vector<std::string> vocab;
      for (const auto& [word, _] : vocabulary_) vocab.push_back(word);
      doc["vocabulary"] = vocab;
      doc["weights"] = weights_;
      break;
    }
    case BuiltinKind::kHashedPerceptron: {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& [bucket, row] : buckets_) {
        rows.push_back({bucket, row});
      }
      doc["bias"] = bias_;
      doc["buckets"] = std::move(rows);
      break;
    }
  }
  return doc.dump(1) + "\n";
}

BuiltinClassifier BuiltinClassifier::Deserialize(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model is not valid JSON: ") + e.what(), 0);
  }
  try {
    if (doc.at("format") != kFormatTag) {
      throw ParseError("not a greybox model document", 0);
    }
    if (doc.at("version").get<int>() != kFormatVersion) {
      throw ParseError("unsupported model version " +
                           doc.at("version").dump(),
                       0);
    }
    BuiltinClassifier model;
    model.kind_ = ParseKind(doc.at("kind").get<std::string>());
    model.name_ = doc.at("name").get<std::string>();
    model.labels_ = doc.at("labels").get<std::vector<std::string>>();
    if (model.labels_.size() < 2 ||
        !std::is_sorted(model.labels_.begin(), model.labels_.end())) {
      throw ParseError("labels must be sorted and at least two", 0);
    }
    const auto& opts = doc.at("options");
    model.options_.alpha = opts.at("alpha").get<double>();
    model.options_.iterations = opts.at("iterations").get<int>();
    model.options_.learning_rate = opts.at("learning_rate").get<double>();
    model.options_.l2 = opts.at("l2").get<double>();
    model.options_.epochs = opts.at("epochs").get<int>();
    model.options_.hash_bits = opts.at("hash_bits").get<int>();
    model.options_.seed = opts.at("seed").get<std::uint64_t>();
    const std::size_t classes = model.labels_.size();

    auto read_vocab = [&] {
      int index = 0;
      for (const auto& w : doc.at("vocabulary")) {
        if (!model.vocabulary_.emplace(w.get<std::string>(), index++).second) {
          throw ParseError("duplicate vocabulary entry", 0);
        }
      }
    };
    switch (model.kind_) {
      case BuiltinKind::kNaiveBayes:
        read_vocab();
        model.documents_per_label_ =
            doc.at("documents_per_label").get<std::vector<std::int64_t>>();
        model.word_counts_ =
            doc.at("word_counts").get<std::vector<std::vector<std::int64_t>>>();
        if (model.documents_per_label_.size() != classes ||
            model.word_counts_.size() != classes) {
          throw ParseError("naive Bayes tables do not match labels", 0);
        }
        for (const auto& row : model.word_counts_) {
          if (row.size() != model.vocabulary_.size()) {
            throw ParseError("word count row has the wrong length", 0);
          }
        }
        model.PrepareNaiveBayes();
        break;
      case BuiltinKind::kLogisticRegression:
        read_vocab();
        model.weights_ =
            doc.at("weights").get<std::vector<std::vector<double>>>();
        if (model.weights_.size() != classes) {
          throw ParseError("weight rows do not match labels", 0);
        }
        for (const auto& row : model.weights_) {
          if (row.size() != model.vocabulary_.size() + 1) {
            throw ParseError("weight row has the wrong length", 0);
          }
        }
        break;
      case BuiltinKind::kHashedPerceptron:
        model.bias_ = doc.at("bias").get<std::vector<double>>();
        if (model.bias_.size() != classes) {
          throw ParseError("bias does not match labels", 0);
        }
        for (const auto& entry : doc.at("buckets")) {
          auto row = entry.at(1).get<std::vector<double>>();
          if (row.size() != classes) {
            throw ParseError("bucket row has the wrong length", 0);
          }
          model.buckets_.emplace(entry.at(0).get<std::uint64_t>(),
                                 std::move(row));
        }
        break;
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what(), 0);
  } catch (const InvalidArgumentError& e) {
    throw ParseError(e.what(), 0);
  }
}

void BuiltinClassifier::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << Serialize();
  if (!out) throw IoError("write failed for " + path.string());
}

BuiltinClassifier BuiltinClassifier::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Deserialize(buffer.str());
}

}  // namespace greybox
