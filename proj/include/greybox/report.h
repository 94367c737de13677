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

// Attack metrics and persisted reports.
//
// A report document is a JSON array with one object per attacked sentence:
//
//   { "original":   {"text", "label", "confidences": {model: score}},
//     "candidates": [{"text", "source", "swaps": [[index, "from", "to"]],
//                     "ensemble": {"n", "n_s", "threshold", "success",
//                                  "votes": [{"model", "flipped", "label",
//                                             "confidence"}]}}],
//     "targets":    [{"model", "text", "flipped", "label", "confidence"}],
//     "metrics":    {"n_sent", "n_succ", "success_rate", "avg_confidence"},
//     "status", "queries_used", "explainer_queries", "error" }
//
// Scores and confidences are fractions in [0, 1]; success_rate and
// avg_confidence are percentages. Undefined values are null.

#ifndef GREYBOX_REPORT_H_
#define GREYBOX_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greybox/attack.h"
#include "greybox/model.h"

namespace greybox {

// 100 * n_succ / n_sent. Throws UndefinedMetricError when n_sent == 0 and
// InvalidArgumentError when n_succ is outside [0, n_sent].
double SuccessRate(std::int64_t n_succ, std::int64_t n_sent);

// Mean of percentages in [0, 100]. Throws UndefinedMetricError when empty.
double AvgConfidence(std::span<const double> confidence_percents);

struct AttackMetrics {
  std::int64_t n_sent = 0;
  std::int64_t n_succ = 0;
  std::optional<double> success_rate;
  std::optional<double> avg_confidence;

  friend bool operator==(const AttackMetrics&, const AttackMetrics&) = default;
};

struct ReportOriginal {
  std::string text;
  std::string label;
  std::map<std::string, double> confidences;

  friend bool operator==(const ReportOriginal&, const ReportOriginal&) = default;
};

struct ReportCandidate {
  CandidateSentence candidate;
  EnsembleVerdict ensemble;

  friend bool operator==(const ReportCandidate&,
                         const ReportCandidate&) = default;
};

struct TargetRow {
  std::string model;
  std::string text;
  // Unset for an unavailable target, never false.
  std::optional<bool> flipped;
  std::optional<std::string> label;
  std::optional<double> confidence;
  std::optional<std::string> error;

  bool available() const { return flipped.has_value(); }
  friend bool operator==(const TargetRow&, const TargetRow&) = default;
};

struct AttackReport {
  ReportOriginal original;
  std::vector<ReportCandidate> candidates;
  std::vector<TargetRow> targets;
  AttackMetrics metrics;
  std::string status;
  std::int64_t queries_used = 0;
  std::int64_t explainer_queries = 0;
  std::optional<std::string> error;

  friend bool operator==(const AttackReport&, const AttackReport&) = default;
};

// Aggregates for the report. With available target rows they describe the
// transfer to targets (a row succeeds when the target flipped); otherwise
// they describe the ensemble (a candidate succeeds when its vote passed, and
// its confidence is the mean over flipped surrogates).
AttackMetrics ComputeMetrics(const AttackReport& report);

// One model's view of the candidates: a candidate succeeds for the model
// when that model flipped, independent of the ensemble threshold.
struct ModelMetrics {
  std::string model;
  std::string role;  // "surrogate" or "target"
  AttackMetrics metrics;
};
std::vector<ModelMetrics> ComputePerModelMetrics(const AttackReport& report);

AttackReport MakeReport(const AttackOutcome& outcome);
// Record for a sentence whose attack could not run.
AttackReport MakeFailedReport(std::string_view text, std::string_view status,
                              std::string_view error);

// Queries each target once per successful candidate and appends the rows.
// Unreachable targets yield rows without a verdict. Earlier rows of the same
// targets are replaced. Recomputes metrics.
// Returns the number of unavailable rows.
int VerifyReport(AttackReport& report,
                 std::span<const ModelAdapter* const> targets);

std::string SerializeReports(std::span<const AttackReport> reports);
// Throws ParseError.
std::vector<AttackReport> ParseReports(std::string_view json);

// Sentence with swapped words marked inline as "(old -> new)".
std::string MarkSwaps(std::string_view original, const CandidateSentence& candidate);

std::string FormatPercent(std::optional<double> percent);

std::string RenderText(std::span<const AttackReport> reports);
std::string RenderCsv(std::span<const AttackReport> reports);

void WriteTextFile(const std::filesystem::path& path, std::string_view content);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace greybox

#endif  // GREYBOX_REPORT_H_
