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

#include "greybox/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "greybox/errors.h"
#include "greybox/text.h"
#include "json.hpp"

namespace greybox {
namespace {

using nlohmann::json;

constexpr char kAbsent[] = "\xE2\x80\x93";  // en dash

json OptionalToJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> OptionalFromJson(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<T>();
}

json ToJson(const AttackReport& report) {
  json original = {{"text", report.original.text},
                   {"label", report.original.label},
                   {"confidences", report.original.confidences}};
  json candidates = json::array();
  for (const auto& entry : report.candidates) {
    json swaps = json::array();
    for (const auto& swap : entry.candidate.swaps) {
      swaps.push_back({swap.word_index, swap.from, swap.to});
    }
    json votes = json::array();
    for (const auto& vote : entry.ensemble.votes) {
      votes.push_back({{"model", vote.model},
                       {"flipped", vote.flipped},
                       {"label", vote.label},
                       {"confidence", vote.confidence}});
    }
    candidates.push_back(
        {{"text", entry.candidate.text},
         {"source", std::string(SourceName(entry.candidate.source))},
         {"swaps", std::move(swaps)},
         {"ensemble", {{"n", entry.ensemble.n},
                       {"n_s", entry.ensemble.n_s},
                       {"threshold", entry.ensemble.threshold},
                       {"success", entry.ensemble.success},
                       {"votes", std::move(votes)}}}});
  }
  json targets = json::array();
  for (const auto& row : report.targets) {
    json r = {{"model", row.model},
              {"text", row.text},
              {"flipped", row.flipped ? json(*row.flipped) : json(nullptr)},
              {"label", row.label ? json(*row.label) : json(nullptr)},
              {"confidence", OptionalToJson(row.confidence)}};
    if (row.error) r["error"] = *row.error;
    targets.push_back(std::move(r));
  }
  json doc = {{"original", std::move(original)},
              {"candidates", std::move(candidates)},
              {"targets", std::move(targets)},
              {"metrics", {{"n_sent", report.metrics.n_sent},
                           {"n_succ", report.metrics.n_succ},
                           {"success_rate", OptionalToJson(report.metrics.success_rate)},
                           {"avg_confidence",
                            OptionalToJson(report.metrics.avg_confidence)}}},
              {"status", report.status},
              {"queries_used", report.queries_used},
              {"explainer_queries", report.explainer_queries}};
  if (report.error) doc["error"] = *report.error;
  return doc;
}

AttackReport FromJson(const json& doc) {
  AttackReport report;
  const json& original = doc.at("original");
  report.original.text = original.at("text").get<std::string>();
  report.original.label = original.at("label").get<std::string>();
  report.original.confidences =
      original.at("confidences").get<std::map<std::string, double>>();
  for (const json& c : doc.at("candidates")) {
    ReportCandidate entry;
    entry.candidate.text = c.at("text").get<std::string>();
    entry.candidate.source =
        ParseSource(c.value("source", std::string("synonym")));
    for (const json& s : c.at("swaps")) {
      entry.candidate.swaps.push_back({s.at(0).get<int>(),
                                       s.at(1).get<std::string>(),
                                       s.at(2).get<std::string>()});
    }
    const json& e = c.at("ensemble");
    entry.ensemble.n = e.at("n").get<int>();
    entry.ensemble.n_s = e.at("n_s").get<int>();
    entry.ensemble.threshold = e.at("threshold").get<int>();
    entry.ensemble.success = e.at("success").get<bool>();
    for (const json& v : e.at("votes")) {
      entry.ensemble.votes.push_back({v.at("model").get<std::string>(),
                                      v.at("flipped").get<bool>(),
                                      v.at("label").get<std::string>(),
                                      v.at("confidence").get<double>()});
    }
    report.candidates.push_back(std::move(entry));
  }
  for (const json& t : doc.at("targets")) {
    TargetRow row;
    row.model = t.at("model").get<std::string>();
    row.text = t.at("text").get<std::string>();
    row.flipped = OptionalFromJson<bool>(t, "flipped");
    row.label = OptionalFromJson<std::string>(t, "label");
    row.confidence = OptionalFromJson<double>(t, "confidence");
    row.error = OptionalFromJson<std::string>(t, "error");
    report.targets.push_back(std::move(row));
  }
  const json& m = doc.at("metrics");
  report.metrics.n_sent = m.at("n_sent").get<std::int64_t>();
  report.metrics.n_succ = m.at("n_succ").get<std::int64_t>();
  report.metrics.success_rate = OptionalFromJson<double>(m, "success_rate");
  report.metrics.avg_confidence = OptionalFromJson<double>(m, "avg_confidence");
  report.status = doc.value("status", std::string());
  report.queries_used = doc.value("queries_used", std::int64_t{0});
  report.explainer_queries = doc.value("explainer_queries", std::int64_t{0});
  report.error = OptionalFromJson<std::string>(doc, "error");
  return report;
}

AttackMetrics Aggregate(std::int64_t n_sent, const std::vector<double>& percents) {
  AttackMetrics m;
  m.n_sent = n_sent;
  m.n_succ = static_cast<std::int64_t>(percents.size());
  if (n_sent > 0) m.success_rate = SuccessRate(m.n_succ, n_sent);
  if (!percents.empty()) m.avg_confidence = AvgConfidence(percents);
  return m;
}

std::string PadRight(std::string_view s, std::size_t width) {
  // Width in code points so that non-ASCII text lines up.
  const std::size_t length = utf8::Decode(s).size();
  std::string out(s);
  if (length < width) out.append(width - length, ' ');
  return out;
}

std::string RenderTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(header.size());
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], utf8::Decode(row[i]).size());
    }
  };
  measure(header);
  for (const auto& row : rows) measure(row);
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    out += "  ";
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += i + 1 == row.size() ? row[i] : PadRight(row[i], widths[i]) + " | ";
    }
    out += "\n";
  };
  emit(header);
  std::vector<std::string> rule;
  for (std::size_t w : widths) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& row : rows) emit(row);
  return out;
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

}  // namespace

double SuccessRate(std::int64_t n_succ, std::int64_t n_sent) {
  if (n_sent == 0) throw UndefinedMetricError("success rate over zero sentences");
  if (n_sent < 0 || n_succ < 0 || n_succ > n_sent) {
    throw InvalidArgumentError("need 0 <= n_succ <= n_sent");
  }
  return 100.0 * static_cast<double>(n_succ) / static_cast<double>(n_sent);
}

double AvgConfidence(std::span<const double> confidence_percents) {
  if (confidence_percents.empty()) {
    throw UndefinedMetricError("average confidence over zero sentences");
  }
  double sum = 0.0;
  for (double c : confidence_percents) {
    if (!(c >= 0.0 && c <= 100.0)) {
      throw InvalidArgumentError("confidence " + std::to_string(c) +
                                 " outside [0, 100]");
    }
    sum += c;
  }
  return sum / static_cast<double>(confidence_percents.size());
}

AttackMetrics ComputeMetrics(const AttackReport& report) {
  std::int64_t available = 0;
  std::vector<double> percents;
  for (const auto& row : report.targets) {
    if (!row.available()) continue;
    ++available;
    if (*row.flipped) percents.push_back(100.0 * row.confidence.value_or(0.0));
  }
  if (available > 0) return Aggregate(available, percents);

  for (const auto& entry : report.candidates) {
    if (!entry.ensemble.success) continue;
    double sum = 0.0;
    int flipped = 0;
    for (const auto& vote : entry.ensemble.votes) {
      if (!vote.flipped) continue;
      sum += vote.confidence;
      ++flipped;
    }
    percents.push_back(flipped > 0 ? 100.0 * sum / flipped : 0.0);
  }
  return Aggregate(static_cast<std::int64_t>(report.candidates.size()), percents);
}

std::vector<ModelMetrics> ComputePerModelMetrics(const AttackReport& report) {
  std::vector<ModelMetrics> out;
  std::vector<std::string> surrogates;
  for (const auto& entry : report.candidates) {
    for (const auto& vote : entry.ensemble.votes) {
      if (std::find(surrogates.begin(), surrogates.end(), vote.model) ==
          surrogates.end()) {
        surrogates.push_back(vote.model);
      }
    }
  }
  for (const auto& model : surrogates) {
    std::int64_t tested = 0;
    std::vector<double> percents;
    for (const auto& entry : report.candidates) {
      for (const auto& vote : entry.ensemble.votes) {
        if (vote.model != model) continue;
        ++tested;
        if (vote.flipped) percents.push_back(100.0 * vote.confidence);
      }
    }
    out.push_back({model, "surrogate", Aggregate(tested, percents)});
  }
  std::vector<std::string> targets;
  for (const auto& row : report.targets) {
    if (std::find(targets.begin(), targets.end(), row.model) == targets.end()) {
      targets.push_back(row.model);
    }
  }
  for (const auto& model : targets) {
    std::int64_t tested = 0;
    std::vector<double> percents;
    for (const auto& row : report.targets) {
      if (row.model != model || !row.available()) continue;
      ++tested;
      if (*row.flipped) percents.push_back(100.0 * row.confidence.value_or(0.0));
    }
    out.push_back({model, "target", Aggregate(tested, percents)});
  }
  return out;
}

AttackReport MakeReport(const AttackOutcome& outcome) {
  AttackReport report;
  report.original.text = outcome.original_text;
  report.original.label = outcome.original_label;
  for (const auto& [model, score] : outcome.original_confidences) {
    report.original.confidences[model] = score;
  }
  for (const auto& scored : outcome.voted) {
    report.candidates.push_back({scored.candidate, scored.verdict});
  }
  report.status = std::string(StatusName(outcome.status));
  report.queries_used = outcome.queries_used;
  report.explainer_queries = outcome.explainer_queries;
  report.metrics = ComputeMetrics(report);
  return report;
}

AttackReport MakeFailedReport(std::string_view text, std::string_view status,
                              std::string_view error) {
  AttackReport report;
  report.original.text = std::string(text);
  report.status = std::string(status);
  report.error = std::string(error);
  report.metrics = ComputeMetrics(report);
  return report;
}

int VerifyReport(AttackReport& report,
                 std::span<const ModelAdapter* const> targets) {
  // Re-verifying a target replaces its earlier rows.
  std::erase_if(report.targets, [&](const TargetRow& row) {
    return std::any_of(targets.begin(), targets.end(), [&](const ModelAdapter* t) {
      return t->name() == row.model;
    });
  });
  int unavailable = 0;
  for (const auto& entry : report.candidates) {
    if (!entry.ensemble.success) continue;
    for (const ModelAdapter* target : targets) {
      TargetRow row;
      row.model = target->name();
      row.text = entry.candidate.text;
      try {
        const TargetVerdict verdict =
            VerifyTarget(entry.candidate, report.original.label, *target);
        row.flipped = verdict.flipped;
        row.label = verdict.label;
        row.confidence = verdict.confidence;
      } catch (const QueryFailure& e) {
        row.error = e.what();
        ++unavailable;
      }
      report.targets.push_back(std::move(row));
    }
  }
  report.metrics = ComputeMetrics(report);
  return unavailable;
}

std::string SerializeReports(std::span<const AttackReport> reports) {
  json doc = json::array();
  for (const auto& report : reports) doc.push_back(ToJson(report));
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::vector<AttackReport> ParseReports(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (!doc.is_array()) throw ParseError("report must be a JSON array", 0);
    std::vector<AttackReport> out;
    for (const json& entry : doc) out.push_back(FromJson(entry));
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 0);
  } catch (const InvalidArgumentError& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 0);
  }
}

std::string MarkSwaps(std::string_view original,
                      const CandidateSentence& candidate) {
  const TokenizedText tokens = Tokenize(original);
  std::vector<WordSwap> marks;
  for (const auto& swap : candidate.swaps) {
    if (swap.word_index < 0 || swap.word_index >= tokens.word_count()) continue;
    marks.push_back({swap.word_index, "(" + swap.from + " -> " + swap.to + ")"});
  }
  return Substitute(tokens, marks);
}

std::string FormatPercent(std::optional<double> percent) {
  if (!percent) return kAbsent;
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f%%", *percent);
  return buffer;
}

std::string RenderText(std::span<const AttackReport> reports) {
  std::ostringstream out;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const AttackReport& report = reports[r];
    out << "Sentence " << r + 1 << ": " << report.original.text << "\n";
    if (report.error) {
      out << "  status: " << report.status << " (" << *report.error << ")\n\n";
      continue;
    }
    out << "  original label: " << report.original.label
        << "  status: " << report.status
        << "  queries: " << report.queries_used << " (+"
        << report.explainer_queries << " explainer)\n\n";

    std::vector<std::vector<std::string>> rows;
    for (std::size_t c = 0; c < report.candidates.size(); ++c) {
      const auto& entry = report.candidates[c];
      rows.push_back({std::to_string(c + 1),
                      std::to_string(entry.ensemble.n_s) + "/" +
                          std::to_string(entry.ensemble.n),
                      entry.ensemble.success ? "yes" : "no",
                      MarkSwaps(report.original.text, entry.candidate)});
    }
    out << "  Candidates\n"
        << RenderTable({"#", "fooled", "pass", "adversarial sentence"}, rows)
        << "\n";

    rows.clear();
    for (const auto& m : ComputePerModelMetrics(report)) {
      rows.push_back({m.model, m.role,
                      std::to_string(m.metrics.n_succ) + "/" +
                          std::to_string(m.metrics.n_sent),
                      FormatPercent(m.metrics.success_rate),
                      FormatPercent(m.metrics.avg_confidence)});
    }
    out << "  Per-model strength\n"
        << RenderTable({"model", "role", "fooled", "% of sentences",
                        "avg % confidence"},
                       rows)
        << "\n";

    rows.clear();
    for (const auto& entry : report.candidates) {
      if (!entry.ensemble.success) continue;
      for (const auto& vote : entry.ensemble.votes) {
        if (!vote.flipped) continue;
        auto it = report.original.confidences.find(vote.model);
        const std::optional<double> before =
            it == report.original.confidences.end()
                ? std::nullopt
                : std::optional<double>(100.0 * it->second);
        rows.push_back({vote.model,
                        report.original.label + " " + FormatPercent(before),
                        vote.label + " " + FormatPercent(100.0 * vote.confidence),
                        MarkSwaps(report.original.text, entry.candidate)});
      }
    }
    out << "  Successful adversarial samples\n"
        << RenderTable({"model", "original prediction", "adversarial prediction",
                        "adversarial sentence"},
                       rows)
        << "\n";

    if (!report.targets.empty()) {
      rows.clear();
      for (const auto& row : report.targets) {
        rows.push_back(
            {row.model,
             row.available() ? FormatPercent(100.0 * row.confidence.value_or(0.0))
                             : kAbsent,
             row.available() ? *row.label : "unavailable",
             row.available() ? (*row.flipped ? "yes" : "no") : kAbsent,
             row.text});
      }
      out << "  Targets\n"
          << RenderTable({"target", "% confidence", "predicted label", "flipped",
                          "adversarial sentence"},
                         rows)
          << "\n";
    }
    out << "  Metrics: " << report.metrics.n_succ << "/" << report.metrics.n_sent
        << " successful, success rate " << FormatPercent(report.metrics.success_rate)
        << ", average confidence " << FormatPercent(report.metrics.avg_confidence)
        << "\n\n";
  }
  return out.str();
}

std::string RenderCsv(std::span<const AttackReport> reports) {
  std::string out =
      "sentence,candidate,role,model,flipped,label,confidence,n_s,threshold,"
      "ensemble_success,text\n";
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const AttackReport& report = reports[r];
    for (std::size_t c = 0; c < report.candidates.size(); ++c) {
      const auto& entry = report.candidates[c];
      for (const auto& vote : entry.ensemble.votes) {
        out += std::to_string(r + 1) + "," + std::to_string(c + 1) +
               ",surrogate," + CsvField(vote.model) + "," +
               (vote.flipped ? "true" : "false") + "," + CsvField(vote.label) +
               "," + Number(vote.confidence) + "," +
               std::to_string(entry.ensemble.n_s) + "," +
               std::to_string(entry.ensemble.threshold) + "," +
               (entry.ensemble.success ? "true" : "false") + "," +
               CsvField(entry.candidate.text) + "\n";
      }
    }
    for (const auto& row : report.targets) {
      out += std::to_string(r + 1) + ",,target," + CsvField(row.model) + "," +
             (row.flipped ? (*row.flipped ? "true" : "false") : "") + "," +
             CsvField(row.label.value_or("")) + "," +
             (row.confidence ? Number(*row.confidence) : "") + ",,,," +
             CsvField(row.text) + "\n";
    }
  }
  return out;
}

void WriteTextFile(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace greybox
