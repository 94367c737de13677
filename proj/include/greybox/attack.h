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

// Greedy synonym-substitution attack validated by a surrogate ensemble.
//
// The sentence is explained once, words are ranked by their contribution to
// the predicted label, and swap candidates of growing size (1, 2, ... k_max
// words) are voted on by every surrogate. A candidate succeeds when at least
// ceil(N/2) of the N surrogates change their prediction. The first swap size
// with any success is finished and returned, so all minimal attacks are
// reported.

#ifndef GREYBOX_ATTACK_H_
#define GREYBOX_ATTACK_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "greybox/explainer.h"
#include "greybox/lexicon.h"
#include "greybox/model.h"
#include "greybox/text.h"

namespace greybox {

enum class CandidateSource { kSynonym, kHomoglyph, kSynonymHomoglyph };

std::string_view SourceName(CandidateSource source);
CandidateSource ParseSource(std::string_view name);

struct SwapRecord {
  int word_index = 0;
  std::string from;
  std::string to;

  friend bool operator==(const SwapRecord&, const SwapRecord&) = default;
};

struct CandidateSentence {
  std::string text;
  std::vector<SwapRecord> swaps;  // sorted by word index
  CandidateSource source = CandidateSource::kSynonym;

  int swap_count() const { return static_cast<int>(swaps.size()); }
  friend bool operator==(const CandidateSentence&,
                         const CandidateSentence&) = default;
};

struct Vote {
  std::string model;
  bool flipped = false;
  std::string label;
  double confidence = 0.0;

  friend bool operator==(const Vote&, const Vote&) = default;
};

struct EnsembleVerdict {
  std::vector<Vote> votes;
  int n = 0;
  int n_s = 0;
  int threshold = 0;
  bool success = false;

  friend bool operator==(const EnsembleVerdict&,
                         const EnsembleVerdict&) = default;
};

// ceil(n / 2).
constexpr int MajorityThreshold(int n) { return (n + 1) / 2; }

using ModelList = std::span<const ModelAdapter* const>;

// Enumerates swap candidates lazily. Words without synonyms are skipped.
// Subsets of `ranked_words` are taken in lexicographic order of rank, and
// within a subset synonym indices advance last-word-fastest, so the first
// candidate of each subset uses every word's first synonym.
class CandidateEnumerator {
 public:
  CandidateEnumerator(const TokenizedText& text, std::vector<int> ranked_words,
                      const SynonymLexicon& lexicon, int swap_size);

  std::optional<CandidateSentence> Next();

 private:
  bool AdvanceSubset();
  bool AdvanceChoice();

  const TokenizedText& text_;
  std::vector<int> words_;
  std::vector<std::vector<std::string>> synonyms_;
  int swap_size_;
  std::vector<int> subset_;
  std::vector<int> choice_;
  bool started_ = false;
  bool done_ = false;
  std::unordered_set<std::string> seen_;
};

std::vector<CandidateSentence> GenerateCandidates(
    const TokenizedText& text, const std::vector<int>& ranked_words,
    const SynonymLexicon& lexicon, int swap_size);

struct VoteOptions {
  std::optional<int> threshold_override;
  // Require every surrogate to flip.
  bool unanimous = false;
};

// Queries each surrogate once. QueryFailure from any surrogate propagates.
EnsembleVerdict EnsembleVote(const CandidateSentence& candidate,
                             std::string_view original_label,
                             ModelList surrogates,
                             const VoteOptions& options = {});

enum class WordOrder {
  kExplained,
  // Seeded random permutation; ablation baseline without the explainer.
  kRandom,
};

struct AttackConfig {
  int k_max = 3;
  std::int64_t max_queries = 10000;
  // Number of ranked words eligible for swapping. Unset means every word
  // with a non-zero contribution.
  std::optional<int> top_m;
  VoteOptions vote;
  ExplainerConfig explainer;
  bool re_explain_per_k = false;
  WordOrder word_order = WordOrder::kExplained;
  std::uint64_t random_order_seed = 42;
  bool homoglyph_fallback = false;
  HomoglyphMap homoglyphs = DefaultHomoglyphMap();
  std::set<char32_t> homoglyph_chars = {U'i'};
  // Candidates voted concurrently.
  int parallelism = 1;
};

enum class AttackStatus { kSuccess, kExhaustedBudget, kExhaustedCandidates };

std::string_view StatusName(AttackStatus status);

struct ScoredCandidate {
  CandidateSentence candidate;
  EnsembleVerdict verdict;
};

struct AttackOutcome {
  std::string original_text;
  std::string original_label;
  // Per surrogate, its score for original_label on the original text.
  std::vector<std::pair<std::string, double>> original_confidences;
  std::optional<Explanation> explanation;
  std::vector<int> word_order;
  std::vector<ScoredCandidate> successes;
  // Every voted candidate in voting order, successes included.
  std::vector<ScoredCandidate> voted;
  // Surrogate queries spent on candidate votes.
  std::int64_t queries_used = 0;
  // Queries spent outside candidate votes.
  std::int64_t explainer_queries = 0;
  std::int64_t baseline_queries = 0;
  AttackStatus status = AttackStatus::kExhaustedCandidates;
};

// Throws InvalidArgumentError for sentences without words, an empty
// surrogate list, or surrogates whose label set differs from the explain
// model's. QueryFailure propagates.
AttackOutcome Attack(std::string_view text, ModelList surrogates,
                     const ModelAdapter& explain_model,
                     const SynonymLexicon& lexicon, const AttackConfig& config);

struct TargetVerdict {
  std::string model;
  bool flipped = false;
  std::string label;
  double confidence = 0.0;
};

// One query of a held-out model. QueryFailure propagates.
TargetVerdict VerifyTarget(const CandidateSentence& candidate,
                           std::string_view original_label,
                           const ModelAdapter& target);

}  // namespace greybox

#endif  // GREYBOX_ATTACK_H_
