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

// Training corpora (CSV with a `text,label` header, RFC 4180 quoting) and
// sentence lists (one sentence per line).

#ifndef GREYBOX_CORPUS_H_
#define GREYBOX_CORPUS_H_

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace greybox {

struct LabeledText {
  std::string text;
  std::string label;
};

// Throws ParseError carrying the 1-based line where the bad record starts.
std::vector<LabeledText> ParseCorpusCsv(std::istream& in);
std::vector<LabeledText> LoadCorpus(const std::filesystem::path& path);

// Non-blank lines, with trailing CR stripped.
std::vector<std::string> LoadSentences(const std::filesystem::path& path);

}  // namespace greybox

#endif  // GREYBOX_CORPUS_H_
