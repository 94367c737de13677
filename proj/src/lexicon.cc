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

#include "greybox/lexicon.h"

#include <algorithm>
#include <fstream>

#include "greybox/errors.h"
#include "greybox/text.h"

namespace greybox {
namespace {

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool SkipLine(std::string_view line) {
  line = Trim(line);
  return line.empty() || line.front() == '#';
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

bool HasUpper(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool IsAllCaps(std::string_view s) {
  int letters = 0;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') ++letters;
  }
  return letters >= 2;
}

char32_t SingleCodePoint(std::string_view field, int line) {
  const std::u32string cps = utf8::Decode(field);
  if (cps.size() != 1 || cps[0] == utf8::kReplacementChar) {
    throw ParseError("expected exactly one character, got '" +
                         std::string(field) + "'",
                     line);
  }
  return cps[0];
}

}  // namespace

void SynonymLexicon::Add(std::string_view headword,
                         const std::vector<std::string>& synonyms) {
  const std::string head = AsciiLower(headword);
  auto& list = entries_[head];
  for (const std::string& raw : synonyms) {
    std::string syn = AsciiLower(raw);
    if (syn.empty() || syn == head) continue;
    if (std::find(list.begin(), list.end(), syn) == list.end()) {
      list.push_back(std::move(syn));
    }
  }
}

const std::vector<std::string>* SynonymLexicon::Find(
    std::string_view word) const {
  auto it = entries_.find(AsciiLower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

SynonymLexicon ParseLexicon(std::istream& in) {
  SynonymLexicon lexicon;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (SkipLine(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("missing tab between headword and synonyms", number);
    }
    const std::string head(Trim(std::string_view(line).substr(0, tab)));
    if (head.empty()) throw ParseError("empty headword", number);
    std::vector<std::string> synonyms;
    std::string_view rest = std::string_view(line).substr(tab + 1);
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view field = Trim(rest.substr(0, comma));
      if (!field.empty()) synonyms.emplace_back(field);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const std::string lowered_head = AsciiLower(head);
    const bool any_usable =
        std::any_of(synonyms.begin(), synonyms.end(), [&](const auto& s) {
          return AsciiLower(s) != lowered_head;
        });
    if (!any_usable) {
      throw ParseError("empty synonym list for '" + head + "'", number);
    }
    lexicon.Add(head, synonyms);
  }
  if (in.bad()) throw IoError("read failure while parsing lexicon");
  return lexicon;
}

SynonymLexicon LoadLexicon(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseLexicon(in);
}

std::vector<std::string> SynonymsFor(const SynonymLexicon& lexicon,
                                     std::string_view word) {
  std::vector<std::string> out;
  const std::vector<std::string>* synonyms = lexicon.Find(word);
  if (synonyms == nullptr) return out;
  const bool all_caps = IsAllCaps(word);
  for (const std::string& syn : *synonyms) {
    out.push_back(all_caps ? AsciiUpper(syn) : syn);
  }
  if (lexicon.include_casefold() && HasUpper(word)) {
    std::string folded = AsciiLower(word);
    if (std::find(out.begin(), out.end(), folded) == out.end()) {
      out.push_back(std::move(folded));
    }
  }
  return out;
}

void HomoglyphMap::Set(char32_t source, char32_t replacement) {
  if (source == replacement) {
    throw InvalidArgumentError("homoglyph maps a character to itself");
  }
  pairs_[source] = replacement;
}

char32_t HomoglyphMap::at(char32_t source) const {
  auto it = pairs_.find(source);
  if (it == pairs_.end()) {
    std::string name;
    utf8::Append(name, source);
    throw InvalidArgumentError("no homoglyph for '" + name + "'");
  }
  return it->second;
}

std::set<char32_t> HomoglyphMap::domain() const {
  std::set<char32_t> out;
  for (const auto& [source, _] : pairs_) out.insert(source);
  return out;
}

void HomoglyphMap::Merge(const HomoglyphMap& other) {
  for (const auto& [source, replacement] : other.pairs_) {
    pairs_[source] = replacement;
  }
}

HomoglyphMap DefaultHomoglyphMap() {
  HomoglyphMap map;
  map.Set(U'a', U'а');
  map.Set(U'c', U'с');
  map.Set(U'e', U'е');
  map.Set(U'i', U'і');
  map.Set(U'o', U'о');
  map.Set(U'p', U'р');
  map.Set(U's', U'ѕ');
  return map;
}

HomoglyphMap ParseHomoglyphs(std::istream& in) {
  HomoglyphMap map;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (SkipLine(line)) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("missing tab", number);
    const std::string_view view(line);
    const char32_t source = SingleCodePoint(view.substr(0, tab), number);
    const char32_t replacement = SingleCodePoint(view.substr(tab + 1), number);
    if (source == replacement) {
      throw ParseError("character mapped to itself", number);
    }
    map.Set(source, replacement);
  }
  if (in.bad()) throw IoError("read failure while parsing homoglyphs");
  return map;
}

HomoglyphMap LoadHomoglyphs(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseHomoglyphs(in);
}

std::string HomoglyphSubstitute(std::string_view text, const HomoglyphMap& map,
                                const std::set<char32_t>& chars) {
  for (char32_t c : chars) map.at(c);
  if (chars.empty()) return std::string(text);
  std::string out;
  out.reserve(text.size() + text.size() / 2);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = utf8::Next(text, pos);
    if (chars.count(cp) != 0 && !(cp == utf8::kReplacementChar)) {
      utf8::Append(out, map.at(cp));
    } else {
      out.append(text.substr(start, pos - start));
    }
  }
  return out;
}

}  // namespace greybox
