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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "greybox/attack.h"
#include "greybox/builtin_classifier.h"
#include "greybox/corpus.h"
#include "greybox/errors.h"
#include "greybox/explainer.h"
#include "greybox/http_model.h"
#include "greybox/lexicon.h"
#include "greybox/random.h"
#include "greybox/report.h"
#include "greybox/text.h"
#include "mock_endpoint.h"
#include "test_util.h"

namespace greybox {
namespace {

// Pinned tolerances.
constexpr double kRoundingTolerance = 0.05;     // after one-decimal rounding
constexpr double kIdentityTolerance = 1e-9;     // metric identities
constexpr double kOracleRelativeError = 1e-9;   // explainer vs dense solve
constexpr double kPlantedRecoveryError = 1e-6;  // lambda = 0 recovery
constexpr int kRankingRuns = 100;
constexpr int kBaselineRuns = 20;
constexpr int kFuzzStrings = 1000;

constexpr char kSentence[] = "possibility of bankruptcy. lack of assurance. Poor stability.";
constexpr char kHomoglyphSentence[] =
    "possibility of bankruptcy. lack of assurance. Inadequate stability.";

struct Check {
  bool ok = true;
  std::string detail;
  void Expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

double Round1(double v) { return std::round(v * 10.0) / 10.0; }

Check MetricIdentities() {
  Check c;
  const double roberta = SuccessRate(1, 12);
  const double funnel = SuccessRate(4, 12);
  c.Expect(std::abs(Round1(roberta) - 8.3) <= kRoundingTolerance, "1/12 -> 8.3%");
  c.Expect(std::abs(Round1(funnel) - 33.3) <= kRoundingTolerance, "4/12 -> 33.3%");
  c.Expect(FormatPercent(roberta) == "8.3%" && FormatPercent(funnel) == "33.3%",
           "rendered percentages");
  const std::vector<double> bert = {89.7, 74.8, 80.1};
  const double expected = (89.7 + 74.8 + 80.1) / 3.0;  // 81.5333...
  c.Expect(std::abs(AvgConfidence(bert) - expected) <= kIdentityTolerance,
           "avg confidence 81.53");
  c.Expect(std::abs(expected - 81.5333333333333) <= 1e-9, "reference value");
  c.Expect(FormatPercent(std::nullopt) == "\xE2\x80\x93", "absent marker");
  c.detail = c.ok ? "8.3%, 33.3%, avg 81.5333%" : c.detail;
  return c;
}

Check VoteOracle() {
  Check c;
  const LabelDistribution stay(testing::kBinary, {0.9, 0.1});
  const LabelDistribution flip(testing::kBinary, {0.3, 0.7});
  const CandidateSentence cand{"x", {}, CandidateSource::kSynonym};
  int cases = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int pattern = 0; pattern < (1 << n); ++pattern) {
      std::vector<ConstantModel> models;
      for (int i = 0; i < n; ++i) {
        models.emplace_back("m" + std::to_string(i), (pattern >> i & 1) ? flip : stay);
      }
      std::vector<const ModelAdapter*> ptrs;
      for (const auto& m : models) ptrs.push_back(&m);
      int flips = 0;
      for (int i = 0; i < n; ++i) flips += pattern >> i & 1;
      const int ceil_half = n / 2 + n % 2;
      const bool oracle = flips >= ceil_half;
      const EnsembleVerdict v = EnsembleVote(cand, "negative", ptrs);
      c.Expect(v.success == oracle && v.n_s == flips,
               "pattern " + std::to_string(pattern) + " of N=" + std::to_string(n));
      ++cases;
    }
  }
  c.Expect(cases == 126, "case count");
  if (c.ok) c.detail = std::to_string(cases) + " patterns";
  return c;
}

// Dense weighted ridge with an unpenalized intercept, solved by QR on the
// stacked system [sqrt(W) X; sqrt(lambda) P] b = [sqrt(W) y; 0].
Eigen::VectorXd OracleRidge(const std::vector<std::vector<int>>& rows,
                            const std::vector<double>& y,
                            const std::vector<double>& w, double lambda) {
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(rows[0].size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + p, p + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + p);
  for (int i = 0; i < n; ++i) {
    const double s = std::sqrt(w[i]);
    a(i, 0) = s;
    for (int j = 0; j < p; ++j) a(i, j + 1) = s * rows[i][j];
    b(i) = s * y[i];
  }
  for (int j = 0; j < p; ++j) a(n + j, j + 1) = std::sqrt(lambda);
  return a.colPivHouseholderQr().solve(b);
}

std::string Words(int w) {
  static const char* kVocab[] = {"possibility", "of", "bankruptcy", "lack", "assurance",
                                 "poor", "stability", "credit", "history", "loans",
                                 "debts", "coverage"};
  std::string s;
  for (int i = 0; i < w; ++i) {
    if (i > 0) s += (i % 3 == 0) ? ". " : " ";
    s += kVocab[i];
  }
  return s + ".";
}

Check ExplainerOracle() {
  Check c;
  // Nonlinear but deterministic: interactions and a sigmoid.
  CallbackModel toy("toy", testing::kBinary, [](std::string_view text) {
    const auto words = Tokenize(text).words();
    double z = -0.4;
    bool poor = false, lack = false;
    for (std::size_t i = 0; i < words.size(); ++i) {
      z += 0.3 * std::sin(1.0 + words[i].size() * 0.7);
      poor |= words[i] == "poor";
      lack |= words[i] == "lack";
    }
    if (poor) z -= 1.5;
    if (poor && lack) z -= 0.8;
    const double p = 1.0 / (1.0 + std::exp(-z));
    return LabelDistribution(testing::kBinary, {1.0 - p, p});
  });
  double worst = 0.0;
  for (int w = 1; w <= 12; ++w) {
    const std::string text = Words(w);
    const TokenizedText tokens = Tokenize(text);
    const auto masks = EnumerateMasks(w);
    for (double lambda : {1.0, 0.01}) {
      ExplainerConfig config;
      config.ridge_lambda = lambda;
      config.target_label = "negative";
      const Explanation e = ExplainWithMasks(text, toy, masks, config);
      std::vector<std::vector<int>> rows;
      std::vector<double> y, weights;
      for (const auto& m : masks) {
        std::vector<int> row(w);
        int kept = 0;
        for (int j = 0; j < w; ++j) kept += row[j] = m.kept(j) ? 1 : 0;
        rows.push_back(row);
        y.push_back(toy.Classify(ApplyMask(tokens, m)).score_of("negative"));
        const double d = 1.0 - std::sqrt(static_cast<double>(kept) / w);
        weights.push_back(std::exp(-d * d / (25.0 * 25.0)));
      }
      const Eigen::VectorXd ref = OracleRidge(rows, y, weights, lambda);
      Eigen::VectorXd got(w + 1);
      got(0) = e.intercept;
      for (int j = 0; j < w; ++j) got(j + 1) = e.contributions[j];
      const double rel = (got - ref).norm() / ref.norm();
      worst = std::max(worst, rel);
      c.Expect(rel <= kOracleRelativeError, "W=" + std::to_string(w));
    }
  }
  // Planted linear model, lambda = 0: exact recovery.
  double worst_planted = 0.0;
  for (int w = 1; w <= 12; ++w) {
    std::vector<double> coef(w);
    for (int j = 0; j < w; ++j) coef[j] = 0.06 * ((j * 7) % 5) - 0.1;
    const std::string text = Words(w);
    const std::vector<std::string> vocab = Tokenize(text).words();
    CallbackModel linear("linear", testing::kBinary, [&](std::string_view t) {
      double p = 0.5;
      for (const auto& word : Tokenize(t).words()) {
        for (int j = 0; j < w; ++j) {
          if (vocab[j] == word) p += coef[j] / 2.0;
        }
      }
      return LabelDistribution(testing::kBinary, {1.0 - p, p});
    });
    ExplainerConfig config;
    config.ridge_lambda = 0.0;
    config.target_label = "positive";
    const Explanation e = ExplainWithMasks(text, linear, EnumerateMasks(w), config);
    worst_planted = std::max(worst_planted, std::abs(e.intercept - 0.5));
    for (int j = 0; j < w; ++j) {
      worst_planted = std::max(worst_planted, std::abs(e.contributions[j] - coef[j] / 2.0));
    }
  }
  c.Expect(worst_planted <= kPlantedRecoveryError, "planted recovery");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max rel err %.2e, planted err %.2e", worst,
                worst_planted);
  if (c.ok) c.detail = buf;
  return c;
}

Check RankingSanity() {
  Check c;
  CallbackModel planted("planted", testing::kBinary, [](std::string_view text) {
    for (const auto& w : Tokenize(text).words()) {
      if (w == "Poor") return LabelDistribution(testing::kBinary, {0.9, 0.1});
    }
    return LabelDistribution(testing::kBinary, {0.2, 0.8});
  });
  int hits = 0;
  for (int seed = 0; seed < kRankingRuns; ++seed) {
    ExplainerConfig config;  // default 1000 samples
    config.seed = static_cast<std::uint64_t>(seed);
    const Explanation e = Explain(kSentence, planted, config);
    hits += e.words[e.ranked[0]] == "Poor";
  }
  c.Expect(hits == kRankingRuns, std::to_string(hits) + "/100 rank-1");
  if (c.ok) c.detail = "100/100 rank-1";
  return c;
}

struct Fixture {
  std::vector<LabeledText> corpus;
  std::vector<BuiltinClassifier> surrogates;
  std::optional<BuiltinClassifier> target;
  SynonymLexicon lexicon;
};

Fixture& Bundled() {
  static Fixture* f = [] {
    auto* f = new Fixture;
    const std::filesystem::path data(GREYBOX_DATA_DIR);
    f->corpus = LoadCorpus(data / "corpus.csv");
    TrainingOptions options;
    for (auto kind : {BuiltinKind::kNaiveBayes, BuiltinKind::kLogisticRegression,
                      BuiltinKind::kHashedPerceptron}) {
      f->surrogates.push_back(BuiltinClassifier::Train(kind, f->corpus, options));
      f->surrogates.back().set_name(std::string(KindName(kind)));
    }
    TrainingOptions held_out;
    held_out.seed = 7;
    f->target.emplace(
        BuiltinClassifier::Train(BuiltinKind::kHashedPerceptron, f->corpus, held_out));
    f->target->set_name("held-out");
    f->lexicon = LoadLexicon(data / "lexicon.tsv");
    return f;
  }();
  return *f;
}

std::vector<const ModelAdapter*> SurrogatePtrs() {
  std::vector<const ModelAdapter*> out;
  for (const auto& m : Bundled().surrogates) out.push_back(&m);
  return out;
}

Check EndToEndTransfer() {
  Check c;
  Fixture& f = Bundled();
  const auto surrogates = SurrogatePtrs();
  const AttackOutcome outcome =
      Attack(kSentence, surrogates, *surrogates[0], f.lexicon, AttackConfig{});
  c.Expect(outcome.original_label == "negative", "original label");
  c.Expect(outcome.status == AttackStatus::kSuccess, "attack succeeded");
  std::string transferred;
  for (const auto& s : outcome.successes) {
    c.Expect(s.candidate.swap_count() == 1, "k=1");
    c.Expect(s.verdict.threshold == 2 && s.verdict.n_s >= 2, "fooled >= 2 of 3");
    if (transferred.empty() &&
        VerifyTarget(s.candidate, outcome.original_label, *f.target).flipped) {
      transferred = MarkSwaps(kSentence, s.candidate);
    }
  }
  c.Expect(!transferred.empty(), "no candidate flipped the held-out model");

  int guided = 0, random = 0;
  for (int seed = 0; seed < kBaselineRuns; ++seed) {
    AttackConfig config;
    config.k_max = 1;
    config.top_m = 1;
    config.explainer.seed = static_cast<std::uint64_t>(seed);
    guided += Attack(kSentence, surrogates, *surrogates[0], f.lexicon, config).status ==
              AttackStatus::kSuccess;
    config.word_order = WordOrder::kRandom;
    config.random_order_seed = static_cast<std::uint64_t>(seed);
    random += Attack(kSentence, surrogates, *surrogates[0], f.lexicon, config).status ==
              AttackStatus::kSuccess;
  }
  c.Expect(guided > random, "guided " + std::to_string(guided) + " vs random " +
                                std::to_string(random));
  if (c.ok) {
    c.detail = transferred + "; guided " + std::to_string(guided) + "/20 vs random " +
               std::to_string(random) + "/20";
  }
  return c;
}

Check HomoglyphPass() {
  Check c;
  const HomoglyphMap map = DefaultHomoglyphMap();
  const std::string out = HomoglyphSubstitute(kHomoglyphSentence, map, {U'i'});
  const std::u32string before = utf8::Decode(kHomoglyphSentence);
  const std::u32string after = utf8::Decode(out);
  c.Expect(before.size() == after.size(), "same length");
  int replaced = 0;
  for (std::size_t i = 0; i < before.size() && i < after.size(); ++i) {
    if (before[i] == after[i]) continue;
    ++replaced;
    // Cyrillic small byelorussian-ukrainian i, drawn like Latin i.
    c.Expect(before[i] == U'i' && after[i] == 0x0456, "replacement glyph");
  }
  int latin_i = 0;
  for (char32_t ch : before) latin_i += ch == U'i';
  c.Expect(replaced == 5 && latin_i == 5, "exactly the 5 'i'");
  c.Expect(Tokenize(out).word_count() == Tokenize(kHomoglyphSentence).word_count(),
           "word count preserved");
  const BuiltinClassifier& nb = Bundled().surrogates[0];
  const LabelDistribution orig = nb.Classify(kHomoglyphSentence);
  const double drop_from = orig.confidence();
  const double drop_to = nb.Classify(out).score_of(orig.label());
  c.Expect(orig.label() == "negative", "original is negative");
  c.Expect(drop_to < drop_from, "score did not drop");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "5 replaced; %s %.3f -> %.3f", orig.label().c_str(),
                drop_from, drop_to);
  if (c.ok) c.detail = buf;
  return c;
}

Check DeterminismAndRoundTrips() {
  Check c;
  const auto surrogates = SurrogatePtrs();
  Fixture& f = Bundled();
  auto run = [&](int parallelism) {
    AttackConfig config;
    config.parallelism = parallelism;
    config.explainer.parallelism = parallelism;
    std::vector<AttackReport> reports;
    for (const char* s : {kSentence, kHomoglyphSentence, "of the and"}) {
      AttackReport r = MakeReport(Attack(s, surrogates, *surrogates[0], f.lexicon, config));
      const std::vector<const ModelAdapter*> targets = {&*f.target};
      VerifyReport(r, targets);
      reports.push_back(std::move(r));
    }
    return SerializeReports(reports);
  };
  const std::string a = run(1);
  c.Expect(a == run(1), "repeat run differs");
  c.Expect(a == run(3), "parallel run differs");
  c.Expect(SerializeReports(ParseReports(a)) == a, "report round-trip");

  Rng rng(2026);
  int tokenize_ok = 0, report_ok = 0;
  for (int i = 0; i < kFuzzStrings; ++i) {
    const std::string s = testing::RandomText(rng);
    tokenize_ok += Tokenize(s).Detokenize() == s;
    AttackReport r;
    r.original.text = testing::RandomText(rng, 40, true);
    r.original.label = testing::RandomText(rng, 4, true);
    r.candidates.push_back({{testing::RandomText(rng, 40, true),
                             {{0, testing::RandomText(rng, 3, true), "x"}},
                             CandidateSource::kSynonym},
                            {}});
    r.metrics = ComputeMetrics(r);
    const std::vector<AttackReport> one = {r};
    report_ok += ParseReports(SerializeReports(one)) == one;
  }
  c.Expect(tokenize_ok == kFuzzStrings, "tokenize round-trip");
  c.Expect(report_ok == kFuzzStrings, "report round-trip fuzz");
  if (c.ok) c.detail = "byte-identical reports; 1000/1000 fuzz round-trips";
  return c;
}

Check HttpConformance() {
  using namespace std::chrono_literals;
  Check c;
  testing::MockEndpoint server;
  auto model = [&](const std::string& path) {
    HttpModelOptions options;
    options.timeout = 300ms;
    options.name = path;
    return std::make_unique<HttpModel>(server.Url(path), options);
  };
  const auto ok = model("/ok");
  const LabelDistribution d = ok->Classify("x");
  c.Expect(d.label() == "positive" && d.confidence() == 0.914, "valid response");

  auto classify = [&](const std::string& path) -> std::string {
    try {
      model(path)->Classify("x");
    } catch (const InvariantViolationError&) {
      return "invariant";
    } catch (const HttpStatusError&) {
      return "status";
    } catch (const MalformedResponseError&) {
      return "malformed";
    } catch (const TimeoutError&) {
      return "timeout";
    } catch (const QueryFailure&) {
      return "other";
    }
    return "none";
  };
  c.Expect(classify("/bad-sum") == "invariant", "score-sum violation");
  c.Expect(classify("/status") == "status", "non-2xx");
  c.Expect(classify("/garbage") == "malformed", "malformed JSON");
  c.Expect(classify("/slow") == "timeout", "timeout");

  // None of them may be read as "not fooled".
  AttackReport report;
  report.original = {"Poor stability.", "negative", {}};
  EnsembleVerdict verdict;
  verdict.n = verdict.n_s = verdict.threshold = 1;
  verdict.success = true;
  report.candidates.push_back(
      {{"short stability.", {{0, "Poor", "short"}}, CandidateSource::kSynonym}, verdict});
  std::vector<std::unique_ptr<HttpModel>> broken;
  for (const char* path : {"/bad-sum", "/status", "/garbage", "/slow"}) {
    broken.push_back(model(path));
  }
  std::vector<const ModelAdapter*> targets;
  for (const auto& m : broken) targets.push_back(m.get());
  c.Expect(VerifyReport(report, targets) == 4, "four unavailable rows");
  for (const auto& row : report.targets) {
    c.Expect(!row.flipped.has_value() && row.error.has_value(),
             row.model + " recorded as a verdict");
  }
  testing::WordWeightModel local("local", {{"poor", -3.0}}, 0.5);
  SynonymLexicon lexicon;
  lexicon.Add("poor", {"short"});
  AttackConfig config;
  config.explainer.num_samples = 20;
  for (const auto& m : broken) {
    const std::vector<const ModelAdapter*> surrogates = {&local, m.get()};
    bool raised = false;
    try {
      Attack("Poor stability.", surrogates, local, lexicon, config);
    } catch (const QueryFailure&) {
      raised = true;
    }
    c.Expect(raised, "attack swallowed failure of " + m->name());
  }
  if (c.ok) c.detail = "4 distinct errors, never a verdict";
  return c;
}

}  // namespace
}  // namespace greybox

int main() {
  using namespace greybox;
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"metric identities", MetricIdentities},
      {"ensemble vote oracle", VoteOracle},
      {"explainer exact oracle", ExplainerOracle},
      {"explainer ranking sanity", RankingSanity},
      {"end-to-end transfer", EndToEndTransfer},
      {"homoglyph pass", HomoglyphPass},
      {"determinism and round-trips", DeterminismAndRoundTrips},
      {"http adapter conformance", HttpConformance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto started = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criteria[i].run();
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%s [%zu] %s (%.2fs): %s\n", check.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, seconds, check.detail.c_str());
    failed += !check.ok;
  }
  return failed == 0 ? 0 : 1;
}
