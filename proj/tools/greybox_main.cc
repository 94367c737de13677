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

// greybox: train surrogate classifiers, explain predictions, run
// synonym-substitution attacks and check transfer to held-out models.
//
// Exit codes: 0 success, 1 attack found nothing, 2 usage or configuration
// error, 3 model unavailable.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "greybox/attack.h"
#include "greybox/builtin_classifier.h"
#include "greybox/corpus.h"
#include "greybox/errors.h"
#include "greybox/explainer.h"
#include "greybox/lexicon.h"
#include "greybox/model_spec.h"
#include "greybox/report.h"
#include "greybox/text.h"

namespace {

using namespace greybox;

constexpr int kExitOk = 0;
constexpr int kExitNothingFound = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnavailable = 3;

struct Flags {
  std::uint64_t seed = 42;
  int verbosity = 0;
  std::string out;
  std::string format = "json";
  int timeout_ms = 5000;

  // train
  std::string corpus;
  std::string kind;
  TrainingOptions training;
  // explain / attack
  std::vector<std::string> surrogates;
  std::string text;
  int samples = 1000;
  double kernel_width = 25.0;
  double ridge = 1.0;
  // attack
  std::string sentences;
  std::string lexicon;
  std::string homoglyphs;
  std::string explain_with;
  int k_max = 3;
  std::int64_t max_queries = 10000;
  std::optional<int> top_m;
  std::optional<int> threshold;
  bool unanimous = false;
  bool homoglyph_fallback = false;
  std::string homoglyph_chars = "i";
  bool no_casefold = false;
  bool re_explain = false;
  int parallel = 1;
  // verify
  std::string report;
  std::vector<std::string> targets;
};

ModelLoadOptions LoadOptions(const Flags& f) {
  ModelLoadOptions options;
  options.http_timeout = std::chrono::milliseconds(f.timeout_ms);
  return options;
}

std::vector<const ModelAdapter*> Pointers(
    const std::vector<std::unique_ptr<ModelAdapter>>& models) {
  std::vector<const ModelAdapter*> out;
  for (const auto& m : models) out.push_back(m.get());
  return out;
}

HomoglyphMap HomoglyphsFor(const Flags& f) {
  HomoglyphMap map = DefaultHomoglyphMap();
  if (!f.homoglyphs.empty()) map.Merge(LoadHomoglyphs(f.homoglyphs));
  return map;
}

std::set<char32_t> CharSet(const std::string& chars) {
  const std::u32string decoded = utf8::Decode(chars);
  return {decoded.begin(), decoded.end()};
}

void EmitReports(const Flags& f, const std::vector<AttackReport>& reports) {
  std::string body;
  if (f.format == "json") {
    body = SerializeReports(reports);
  } else if (f.format == "csv") {
    body = RenderCsv(reports);
  } else {
    body = RenderText(reports);
  }
  if (f.out.empty()) {
    std::cout << body;
  } else {
    WriteTextFile(f.out, body);
    if (f.verbosity > 0) std::cerr << "wrote " << f.out << "\n";
  }
}

int RunTrain(const Flags& f) {
  const std::vector<LabeledText> corpus = LoadCorpus(f.corpus);
  TrainingOptions options = f.training;
  options.seed = f.seed;
  BuiltinClassifier model =
      BuiltinClassifier::Train(ParseKind(f.kind), corpus, options);
  model.Save(f.out);
  std::printf("trained %s on %zu examples\n",
              std::string(KindName(model.kind())).c_str(), corpus.size());
  std::printf("train accuracy: %.4f\n", model.Accuracy(corpus));
  return kExitOk;
}

int RunExplain(const Flags& f) {
  if (f.surrogates.empty()) throw InvalidArgumentError("--model is required");
  if (Tokenize(f.text).word_count() == 0) {
    throw InvalidArgumentError("sentence has no words");
  }
  auto model = LoadModel(ParseModelSpec(f.surrogates.front()), LoadOptions(f));
  ExplainerConfig config;
  config.num_samples = f.samples;
  config.kernel_width = f.kernel_width;
  config.ridge_lambda = f.ridge;
  config.seed = f.seed;
  const Explanation explanation = Explain(f.text, *model, config);
  std::printf("model: %s\n", model->name().c_str());
  std::printf("predicted label: %s (%.4f)\n", explanation.predicted_label.c_str(),
              explanation.predicted_confidence);
  std::printf("intercept: %+.6f%s\n", explanation.intercept,
              explanation.degenerate ? "  (constant response)" : "");
  std::printf("%-5s %-20s %s\n", "rank", "word", "contribution");
  for (std::size_t r = 0; r < explanation.ranked.size(); ++r) {
    const int w = explanation.ranked[r];
    std::printf("%-5zu %-20s %+.6f\n", r + 1, explanation.words[w].c_str(),
                explanation.contributions[w]);
  }
  return kExitOk;
}

int RunAttack(const Flags& f) {
  if (f.surrogates.empty()) {
    throw InvalidArgumentError("at least one --surrogate is required");
  }
  std::vector<std::string> sentences;
  if (!f.sentences.empty()) sentences = LoadSentences(f.sentences);
  if (!f.text.empty()) sentences.push_back(f.text);
  if (sentences.empty()) throw InvalidArgumentError("no sentences to attack");

  SynonymLexicon lexicon = LoadLexicon(f.lexicon);
  lexicon.set_include_casefold(!f.no_casefold);

  auto surrogates = LoadModels(f.surrogates, LoadOptions(f));
  std::unique_ptr<ModelAdapter> explain_owner;
  const ModelAdapter* explain_model = surrogates.front().get();
  if (!f.explain_with.empty()) {
    explain_owner = LoadModel(ParseModelSpec(f.explain_with), LoadOptions(f));
    explain_model = explain_owner.get();
  }
  auto targets = LoadModels(f.targets, LoadOptions(f));
  const auto surrogate_ptrs = Pointers(surrogates);
  const auto target_ptrs = Pointers(targets);

  AttackConfig config;
  config.k_max = f.k_max;
  config.max_queries = f.max_queries;
  config.top_m = f.top_m;
  config.vote.threshold_override = f.threshold;
  config.vote.unanimous = f.unanimous;
  config.explainer.num_samples = f.samples;
  config.explainer.kernel_width = f.kernel_width;
  config.explainer.ridge_lambda = f.ridge;
  config.explainer.seed = f.seed;
  config.explainer.parallelism = f.parallel;
  config.re_explain_per_k = f.re_explain;
  config.homoglyph_fallback = f.homoglyph_fallback;
  config.homoglyphs = HomoglyphsFor(f);
  config.homoglyph_chars = CharSet(f.homoglyph_chars);
  config.parallelism = f.parallel;

  std::vector<AttackReport> reports;
  bool any_success = false;
  bool any_unavailable = false;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::string& sentence = sentences[i];
    try {
      const AttackOutcome outcome =
          Attack(sentence, surrogate_ptrs, *explain_model, lexicon, config);
      AttackReport report = MakeReport(outcome);
      if (!target_ptrs.empty() && !outcome.successes.empty()) {
        any_unavailable |= VerifyReport(report, target_ptrs) > 0;
      }
      any_success |= outcome.status == AttackStatus::kSuccess;
      std::cerr << "[" << i + 1 << "] " << report.status;
      if (!outcome.successes.empty()) {
        const auto& best = outcome.successes.front();
        std::cerr << " k=" << best.candidate.swap_count() << " "
                  << best.verdict.n_s << "/" << best.verdict.n << ": "
                  << MarkSwaps(sentence, best.candidate);
      } else {
        std::cerr << ": " << sentence;
      }
      std::cerr << "\n";
      reports.push_back(std::move(report));
    } catch (const QueryFailure& e) {
      any_unavailable = true;
      std::cerr << "[" << i + 1 << "] model-unavailable: " << e.what() << "\n";
      reports.push_back(MakeFailedReport(sentence, "model-unavailable", e.what()));
    } catch (const InvalidArgumentError& e) {
      std::cerr << "[" << i + 1 << "] skipped: " << e.what() << "\n";
      reports.push_back(MakeFailedReport(sentence, "invalid-input", e.what()));
    }
  }
  EmitReports(f, reports);
  if (any_success) return kExitOk;
  return any_unavailable ? kExitUnavailable : kExitNothingFound;
}

int RunVerify(const Flags& f) {
  if (f.targets.empty()) throw InvalidArgumentError("at least one --target is required");
  std::vector<AttackReport> reports = ParseReports(ReadTextFile(f.report));
  std::size_t successful = 0;
  for (const auto& report : reports) {
    for (const auto& entry : report.candidates) successful += entry.ensemble.success;
  }
  if (successful == 0) {
    std::cerr << "warning: report has no successful candidates; nothing to verify\n";
    return kExitOk;
  }
  auto targets = LoadModels(f.targets, LoadOptions(f));
  const auto target_ptrs = Pointers(targets);
  int unavailable = 0;
  for (auto& report : reports) unavailable += VerifyReport(report, target_ptrs);
  Flags out = f;
  if (out.out.empty() && out.format == "json") out.out = f.report;
  EmitReports(out, reports);
  for (const auto& report : reports) {
    std::cerr << "transfer: " << report.metrics.n_succ << "/" << report.metrics.n_sent
              << " rows flipped, avg confidence "
              << FormatPercent(report.metrics.avg_confidence) << "\n";
  }
  return unavailable > 0 ? kExitUnavailable : kExitOk;
}

int RunHomoglyph(const Flags& f) {
  std::cout << HomoglyphSubstitute(f.text, HomoglyphsFor(f), CharSet(f.homoglyph_chars))
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grey-box adversarial text attacks guided by local explanations"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_flag("-v,--verbose", f.verbosity, "More console output");
    cmd->add_option("--timeout-ms", f.timeout_ms, "HTTP model timeout")
        ->capture_default_str();
  };
  auto add_explainer = [&](CLI::App* cmd) {
    cmd->add_option("--samples", f.samples, "Perturbation samples")
        ->capture_default_str();
    cmd->add_option("--kernel-width", f.kernel_width, "Proximity kernel width")
        ->capture_default_str();
    cmd->add_option("--ridge", f.ridge, "Ridge regularization")->capture_default_str();
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", f.out, "Output file");
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "Train a builtin classifier");
  add_common(train);
  train->add_option("--corpus", f.corpus, "CSV with text,label header")->required();
  train->add_option("--kind", f.kind, "nb | lr | perceptron")->required();
  train->add_option("--out", f.out, "Model file")->required();
  train->add_option("--alpha", f.training.alpha, "NB smoothing")->capture_default_str();
  train->add_option("--iterations", f.training.iterations, "LR iterations")
      ->capture_default_str();
  train->add_option("--learning-rate", f.training.learning_rate, "LR step size")
      ->capture_default_str();
  train->add_option("--l2", f.training.l2, "LR L2 penalty")->capture_default_str();
  train->add_option("--epochs", f.training.epochs, "Perceptron epochs")
      ->capture_default_str();
  train->add_option("--hash-bits", f.training.hash_bits, "Perceptron hash bits")
      ->capture_default_str();

  auto* explain = app.add_subcommand("explain", "Rank word contributions");
  add_common(explain);
  add_explainer(explain);
  explain->add_option("-m,--model,--surrogate", f.surrogates, "Model spec")
      ->required()
      ->allow_extra_args(false);
  explain->add_option("text,--text", f.text, "Sentence to explain")->required();

  auto* attack = app.add_subcommand("attack", "Run the synonym attack");
  add_common(attack);
  add_explainer(attack);
  add_output(attack);
  attack->add_option("--sentences", f.sentences, "One sentence per line");
  attack->add_option("--text", f.text, "Single sentence");
  attack->add_option("--surrogate", f.surrogates, "Surrogate model spec (repeatable)")
      ->required()
      ->allow_extra_args(false);
  attack->add_option("--explain-with", f.explain_with,
                     "Model to explain against (default: first surrogate)");
  attack->add_option("--target", f.targets, "Held-out model spec (repeatable)")
      ->allow_extra_args(false);
  attack->add_option("--lexicon", f.lexicon, "Synonym TSV")->required();
  attack->add_option("--homoglyphs", f.homoglyphs, "Extra homoglyph TSV");
  attack->add_option("--k-max", f.k_max, "Largest swap size")->capture_default_str();
  attack->add_option("--max-queries", f.max_queries, "Surrogate query budget")
      ->capture_default_str();
  attack->add_option("--top-m", f.top_m, "Only swap the m best-ranked words");
  attack->add_option("--threshold", f.threshold, "Surrogates that must flip");
  attack->add_flag("--unanimous", f.unanimous, "Every surrogate must flip");
  attack->add_flag("--homoglyph-fallback", f.homoglyph_fallback,
                   "Retry the closest failure with homoglyphs");
  attack->add_option("--homoglyph-chars", f.homoglyph_chars,
                     "Characters replaced by the fallback")
      ->capture_default_str();
  attack->add_flag("--no-casefold", f.no_casefold,
                   "Do not try a capitalized word's lowercase form");
  attack->add_flag("--re-explain", f.re_explain, "Explain again for every swap size");
  attack->add_option("--parallel", f.parallel, "Concurrent model queries")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Query held-out targets");
  add_common(verify);
  add_output(verify);
  verify->add_option("--report", f.report, "Report from `attack`")->required();
  verify->add_option("--target", f.targets, "Target model spec (repeatable)")
      ->required()
      ->allow_extra_args(false);

  auto* homoglyph = app.add_subcommand("homoglyph", "Swap characters for look-alikes");
  homoglyph->add_option("text,--text", f.text, "Text to transform")->required();
  homoglyph->add_option("--homoglyphs", f.homoglyphs, "Extra homoglyph TSV");
  homoglyph->add_option("--chars", f.homoglyph_chars, "Characters to replace")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return RunTrain(f);
    if (*explain) return RunExplain(f);
    if (*attack) return RunAttack(f);
    if (*verify) return RunVerify(f);
    if (*homoglyph) return RunHomoglyph(f);
  } catch (const QueryFailure& e) {
    std::cerr << "model unavailable: " << e.what() << "\n";
    return kExitUnavailable;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
