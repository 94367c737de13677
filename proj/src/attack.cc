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

#include "greybox/attack.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "greybox/errors.h"
#include "greybox/parallel.h"
#include "greybox/random.h"

namespace greybox {
namespace {

std::vector<std::string> SortedLabels(const ModelAdapter& model) {
  std::vector<std::string> labels = model.labels();
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::vector<int> EligibleWords(const Explanation& explanation,
                               std::optional<int> top_m) {
  std::vector<int> eligible;
  for (int w : explanation.ranked) {
    if (explanation.contributions[w] != 0.0) eligible.push_back(w);
  }
  if (top_m && static_cast<int>(eligible.size()) > *top_m) {
    eligible.resize(std::max(0, *top_m));
  }
  return eligible;
}

std::vector<int> RandomOrder(int words, std::uint64_t seed,
                             std::optional<int> top_m) {
  std::vector<int> order(words);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[UniformBelow(rng, i)]);
  }
  if (top_m && static_cast<int>(order.size()) > *top_m) {
    order.resize(std::max(0, *top_m));
  }
  return order;
}

// Highest N_s, then fewest swaps; earlier candidates win remaining ties.
bool BetterFailure(const ScoredCandidate& lhs, const ScoredCandidate& rhs) {
  if (lhs.verdict.n_s != rhs.verdict.n_s) {
    return lhs.verdict.n_s > rhs.verdict.n_s;
  }
  return lhs.candidate.swap_count() < rhs.candidate.swap_count();
}

}  // namespace

std::string_view SourceName(CandidateSource source) {
  switch (source) {
    case CandidateSource::kSynonym:
      return "synonym";
    case CandidateSource::kHomoglyph:
      return "homoglyph";
    case CandidateSource::kSynonymHomoglyph:
      return "synonym+homoglyph";
  }
  return "synonym";
}

CandidateSource ParseSource(std::string_view name) {
  if (name == "synonym") return CandidateSource::kSynonym;
  if (name == "homoglyph") return CandidateSource::kHomoglyph;
  if (name == "synonym+homoglyph") return CandidateSource::kSynonymHomoglyph;
  throw InvalidArgumentError("unknown candidate source '" + std::string(name) +
                             "'");
}

std::string_view StatusName(AttackStatus status) {
  switch (status) {
    case AttackStatus::kSuccess:
      return "success";
    case AttackStatus::kExhaustedBudget:
      return "exhausted-budget";
    case AttackStatus::kExhaustedCandidates:
      return "exhausted-candidates";
  }
  return "exhausted-candidates";
}

CandidateEnumerator::CandidateEnumerator(const TokenizedText& text,
                                         std::vector<int> ranked_words,
                                         const SynonymLexicon& lexicon,
                                         int swap_size)
    : text_(text), swap_size_(swap_size) {
  std::unordered_set<int> taken;
  for (int w : ranked_words) {
    if (!taken.insert(w).second) continue;
    std::vector<std::string> options = SynonymsFor(lexicon, text.word(w).surface);
    if (options.empty()) continue;
    words_.push_back(w);
    synonyms_.push_back(std::move(options));
  }
  seen_.insert(text.original());
}

bool CandidateEnumerator::AdvanceChoice() {
  for (int i = swap_size_ - 1; i >= 0; --i) {
    if (++choice_[i] < static_cast<int>(synonyms_[subset_[i]].size())) {
      return true;
    }
    choice_[i] = 0;
  }
  return false;
}

bool CandidateEnumerator::AdvanceSubset() {
  const int n = static_cast<int>(words_.size());
  int i = swap_size_ - 1;
  while (i >= 0 && subset_[i] == n - swap_size_ + i) --i;
  if (i < 0) return false;
  ++subset_[i];
  for (int j = i + 1; j < swap_size_; ++j) subset_[j] = subset_[j - 1] + 1;
  return true;
}

std::optional<CandidateSentence> CandidateEnumerator::Next() {
  while (!done_) {
    if (!started_) {
      started_ = true;
      if (swap_size_ < 1 || swap_size_ > static_cast<int>(words_.size())) {
        done_ = true;
        break;
      }
      subset_.resize(swap_size_);
      std::iota(subset_.begin(), subset_.end(), 0);
      choice_.assign(swap_size_, 0);
    } else if (!AdvanceChoice()) {
      if (!AdvanceSubset()) {
        done_ = true;
        break;
      }
      choice_.assign(swap_size_, 0);
    }

    CandidateSentence candidate;
    std::vector<WordSwap> swaps;
    for (int i = 0; i < swap_size_; ++i) {
      const int w = words_[subset_[i]];
      const std::string& replacement = synonyms_[subset_[i]][choice_[i]];
      candidate.swaps.push_back({w, text_.word(w).surface, replacement});
      swaps.push_back({w, replacement});
    }
    std::sort(candidate.swaps.begin(), candidate.swaps.end(),
              [](const auto& a, const auto& b) {
                return a.word_index < b.word_index;
              });
    candidate.text = Substitute(text_, swaps);
    if (!seen_.insert(candidate.text).second) continue;
    return candidate;
  }
  return std::nullopt;
}

std::vector<CandidateSentence> GenerateCandidates(
    const TokenizedText& text, const std::vector<int>& ranked_words,
    const SynonymLexicon& lexicon, int swap_size) {
  CandidateEnumerator enumerator(text, ranked_words, lexicon, swap_size);
  std::vector<CandidateSentence> out;
  while (auto candidate = enumerator.Next()) out.push_back(std::move(*candidate));
  return out;
}

EnsembleVerdict EnsembleVote(const CandidateSentence& candidate,
                             std::string_view original_label,
                             ModelList surrogates, const VoteOptions& options) {
  if (surrogates.empty()) throw InvalidArgumentError("no surrogate models");
  EnsembleVerdict verdict;
  verdict.n = static_cast<int>(surrogates.size());
  if (options.unanimous) {
    verdict.threshold = verdict.n;
  } else if (options.threshold_override) {
    if (*options.threshold_override < 1 ||
        *options.threshold_override > verdict.n) {
      throw InvalidArgumentError("threshold must lie in [1, N]");
    }
    verdict.threshold = *options.threshold_override;
  } else {
    verdict.threshold = MajorityThreshold(verdict.n);
  }
  for (const ModelAdapter* model : surrogates) {
    const LabelDistribution dist = model->Classify(candidate.text);
    if (!dist.has_label(original_label)) {
      throw InvalidArgumentError("surrogate '" + model->name() +
                                 "' does not know label '" +
                                 std::string(original_label) + "'");
    }
    Vote vote;
    vote.model = model->name();
    vote.label = dist.label();
    vote.confidence = dist.confidence();
    vote.flipped = vote.label != original_label;
    verdict.n_s += vote.flipped ? 1 : 0;
    verdict.votes.push_back(std::move(vote));
  }
  verdict.success = verdict.n_s >= verdict.threshold;
  return verdict;
}

AttackOutcome Attack(std::string_view text, ModelList surrogates,
                     const ModelAdapter& explain_model,
                     const SynonymLexicon& lexicon, const AttackConfig& config) {
  if (surrogates.empty()) throw InvalidArgumentError("no surrogate models");
  if (config.k_max < 1) throw InvalidArgumentError("k_max must be >= 1");
  if (config.max_queries < 1) {
    throw InvalidArgumentError("max_queries must be >= 1");
  }
  const TokenizedText tokens = Tokenize(text);
  if (tokens.word_count() == 0) {
    throw InvalidArgumentError("sentence has no words");
  }
  const std::vector<std::string> label_set = SortedLabels(explain_model);
  for (const ModelAdapter* model : surrogates) {
    if (SortedLabels(*model) != label_set) {
      throw InvalidArgumentError("surrogate '" + model->name() +
                                 "' does not share the label set of '" +
                                 explain_model.name() + "'");
    }
  }

  AttackOutcome outcome;
  outcome.original_text = std::string(text);

  auto explain = [&](std::uint64_t seed) {
    ExplainerConfig cfg = config.explainer;
    cfg.seed = seed;
    Explanation explanation = Explain(text, explain_model, cfg);
    outcome.explainer_queries += explanation.queries;
    outcome.word_order = EligibleWords(explanation, config.top_m);
    outcome.explanation = std::move(explanation);
  };
  if (config.word_order == WordOrder::kExplained) {
    explain(config.explainer.seed);
    outcome.original_label = outcome.explanation->predicted_label;
  } else {
    outcome.original_label = explain_model.Classify(text).label();
    outcome.explainer_queries = 1;
    outcome.word_order =
        RandomOrder(tokens.word_count(), config.random_order_seed, config.top_m);
  }

  for (const ModelAdapter* model : surrogates) {
    outcome.original_confidences.emplace_back(
        model->name(), model->Classify(text).score_of(outcome.original_label));
    ++outcome.baseline_queries;
  }

  const std::int64_t cost = static_cast<std::int64_t>(surrogates.size());
  const std::size_t batch_limit =
      static_cast<std::size_t>(std::max(1, config.parallelism));
  bool out_of_budget = false;
  std::optional<ScoredCandidate> best_failure;

  auto vote_batch = [&](std::vector<CandidateSentence>& batch) {
    std::vector<EnsembleVerdict> verdicts(batch.size());
    ParallelFor(batch.size(), config.parallelism, [&](std::size_t i) {
      verdicts[i] = EnsembleVote(batch[i], outcome.original_label, surrogates,
                                 config.vote);
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      outcome.queries_used += cost;
      ScoredCandidate scored{std::move(batch[i]), std::move(verdicts[i])};
      if (scored.verdict.success) {
        outcome.successes.push_back(scored);
      } else if (!best_failure || BetterFailure(scored, *best_failure)) {
        best_failure = scored;
      }
      outcome.voted.push_back(std::move(scored));
    }
    batch.clear();
  };

  for (int k = 1; k <= config.k_max && !out_of_budget; ++k) {
    if (k > 1 && config.re_explain_per_k &&
        config.word_order == WordOrder::kExplained) {
      explain(config.explainer.seed + static_cast<std::uint64_t>(k - 1));
    }
    CandidateEnumerator enumerator(tokens, outcome.word_order, lexicon, k);
    std::vector<CandidateSentence> batch;
    while (auto candidate = enumerator.Next()) {
      const std::int64_t committed =
          outcome.queries_used + cost * static_cast<std::int64_t>(batch.size());
      if (committed + cost > config.max_queries) {
        out_of_budget = true;
        break;
      }
      batch.push_back(std::move(*candidate));
      if (batch.size() == batch_limit) vote_batch(batch);
    }
    vote_batch(batch);
    if (!outcome.successes.empty()) break;
  }

  if (outcome.successes.empty() && config.homoglyph_fallback && best_failure &&
      outcome.queries_used + cost <= config.max_queries) {
    CandidateSentence disguised = best_failure->candidate;
    disguised.text = HomoglyphSubstitute(disguised.text, config.homoglyphs,
                                         config.homoglyph_chars);
    disguised.source = CandidateSource::kSynonymHomoglyph;
    std::vector<CandidateSentence> batch{std::move(disguised)};
    vote_batch(batch);
  }

  if (!outcome.successes.empty()) {
    outcome.status = AttackStatus::kSuccess;
  } else if (out_of_budget) {
    outcome.status = AttackStatus::kExhaustedBudget;
  } else {
    outcome.status = AttackStatus::kExhaustedCandidates;
  }
  return outcome;
}

TargetVerdict VerifyTarget(const CandidateSentence& candidate,
                           std::string_view original_label,
                           const ModelAdapter& target) {
  const LabelDistribution dist = target.Classify(candidate.text);
  TargetVerdict verdict;
  verdict.model = target.name();
  verdict.label = dist.label();
  verdict.confidence = dist.confidence();
  verdict.flipped = verdict.label != original_label;
  return verdict;
}

}  // namespace greybox
