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

// Synonym lexicon and homoglyph tables.
//
// Lexicon files hold one entry per line, `headword<TAB>syn1,syn2,...`, with
// `#` comments. Homoglyph files hold `source<TAB>replacement` pairs of
// single code points.

#ifndef GREYBOX_LEXICON_H_
#define GREYBOX_LEXICON_H_

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace greybox {

class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  // Merges synonyms into the entry for `headword`. Everything is lowercased,
  // the headword itself is dropped and duplicates keep their first position.
  void Add(std::string_view headword, const std::vector<std::string>& synonyms);

  // Lowercase lookup; nullptr when absent.
  const std::vector<std::string>* Find(std::string_view word) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // When set, a query containing uppercase letters also yields its own
  // lowercase form as the last candidate ("Poor" -> "poor").
  bool include_casefold() const { return include_casefold_; }
  void set_include_casefold(bool value) { include_casefold_ = value; }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
  bool include_casefold_ = true;
};

// Throws ParseError (with line number) on a line without a tab or with an
// empty synonym list, IoError when the file cannot be read.
SynonymLexicon ParseLexicon(std::istream& in);
SynonymLexicon LoadLexicon(const std::filesystem::path& path);

// Replacement candidates for a surface word, cased after the query: an
// all-caps query gives all-caps synonyms, anything else lowercase ones.
std::vector<std::string> SynonymsFor(const SynonymLexicon& lexicon,
                                     std::string_view word);

class HomoglyphMap {
 public:
  HomoglyphMap() = default;

  // Throws InvalidArgumentError when source == replacement.
  void Set(char32_t source, char32_t replacement);
  bool contains(char32_t source) const { return pairs_.count(source) != 0; }
  char32_t at(char32_t source) const;
  const std::map<char32_t, char32_t>& pairs() const { return pairs_; }
  std::set<char32_t> domain() const;

  // Later pairs override earlier ones.
  void Merge(const HomoglyphMap& other);

 private:
  std::map<char32_t, char32_t> pairs_;
};

// Cyrillic look-alikes for Latin a, c, e, i, o, p and s.
HomoglyphMap DefaultHomoglyphMap();

HomoglyphMap ParseHomoglyphs(std::istream& in);
HomoglyphMap LoadHomoglyphs(const std::filesystem::path& path);

// Replaces every occurrence of each chosen source character. Throws
// InvalidArgumentError naming the first character missing from the map.
std::string HomoglyphSubstitute(std::string_view text, const HomoglyphMap& map,
                                const std::set<char32_t>& chars);

}  // namespace greybox

#endif  // GREYBOX_LEXICON_H_
