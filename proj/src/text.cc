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

#include "greybox/text.h"

#include <algorithm>
#include <unordered_map>

#include "greybox/errors.h"

namespace greybox {
namespace utf8 {

char32_t Next(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  int length = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return kReplacementChar;
  }
  if (pos + length > s.size()) {
    ++pos;
    return kReplacementChar;
  }
  for (int i = 1; i < length; ++i) {
    const auto cont = static_cast<unsigned char>(s[pos + i]);
    if ((cont & 0xC0) != 0x80) {
      ++pos;
      return kReplacementChar;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  // Overlong forms, surrogates and out-of-range values.
  static constexpr char32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMinForLength[length] || cp > 0x10FFFF ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacementChar;
  }
  pos += length;
  return cp;
}

std::u32string Decode(std::string_view s) {
  std::u32string out;
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(Next(s, pos));
  return out;
}

void Append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string Encode(std::u32string_view cps) {
  std::string out;
  for (char32_t cp : cps) Append(out, cp);
  return out;
}

}  // namespace utf8

namespace {

bool IsSpace(char32_t cp) {
  switch (cp) {
    case ' ':
    case '\t':
    case '\n':
    case '\r':
    case '\v':
    case '\f':
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool IsApostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }

bool IsWordChar(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
           (cp >= 'A' && cp <= 'Z');
  }
  if (cp == utf8::kReplacementChar) return false;
  if (cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  // Punctuation, symbol, private-use and emoji blocks.
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xE000 && cp <= 0xF8FF) return false;
  if (cp >= 0xFE10 && cp <= 0xFE6F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;
  return true;
}

}  // namespace

TokenizedText Tokenize(std::string_view text) {
  TokenizedText result;
  result.original_ = std::string(text);
  std::size_t pos = 0;
  auto emit = [&](std::size_t start, std::size_t end, TokenKind kind) {
    Token token;
    token.surface = std::string(text.substr(start, end - start));
    token.start = start;
    token.end = end;
    token.kind = kind;
    if (kind == TokenKind::kWord) {
      token.word_index = static_cast<int>(result.word_tokens_.size());
      result.word_tokens_.push_back(result.tokens_.size());
    }
    result.tokens_.push_back(std::move(token));
  };

  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = utf8::Next(text, pos);
    if (IsSpace(cp)) {
      std::size_t probe = pos;
      while (probe < text.size()) {
        std::size_t next = probe;
        if (!IsSpace(utf8::Next(text, next))) break;
        probe = next;
      }
      pos = probe;
      emit(start, pos, TokenKind::kWhitespace);
    } else if (IsWordChar(cp)) {
      while (pos < text.size()) {
        std::size_t next = pos;
        const char32_t c = utf8::Next(text, next);
        if (IsWordChar(c)) {
          pos = next;
          continue;
        }
        if (IsApostrophe(c) && next < text.size()) {
          std::size_t after = next;
          if (IsWordChar(utf8::Next(text, after))) {
            pos = after;
            continue;
          }
        }
        break;
      }
      emit(start, pos, TokenKind::kWord);
    } else {
      emit(start, pos, TokenKind::kPunctuation);
    }
  }
  return result;
}

const Token& TokenizedText::word(int i) const {
  return tokens_[word_token_position(i)];
}

std::size_t TokenizedText::word_token_position(int i) const {
  if (i < 0 || i >= word_count()) {
    throw IndexOutOfRangeError("word index " + std::to_string(i) +
                               " out of range for " +
                               std::to_string(word_count()) + " words");
  }
  return word_tokens_[i];
}

std::vector<std::string> TokenizedText::words() const {
  std::vector<std::string> out;
  out.reserve(word_tokens_.size());
  for (std::size_t p : word_tokens_) out.push_back(tokens_[p].surface);
  return out;
}

std::string TokenizedText::Detokenize() const {
  std::string out;
  out.reserve(original_.size());
  for (const Token& token : tokens_) out += token.surface;
  return out;
}

PerturbationMask::PerturbationMask(std::vector<std::uint8_t> bits)
    : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

PerturbationMask PerturbationMask::AllOnes(int word_count) {
  return PerturbationMask(std::vector<std::uint8_t>(word_count, 1));
}

int PerturbationMask::kept_count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

std::string ApplyMask(const TokenizedText& text, const PerturbationMask& mask) {
  if (mask.size() != text.word_count()) {
    throw LengthMismatchError("mask has " + std::to_string(mask.size()) +
                              " bits but the sentence has " +
                              std::to_string(text.word_count()) + " words");
  }
  const auto tokens = text.tokens();
  const std::size_t n = tokens.size();
  std::vector<bool> dropped(n, false);

  auto drop_if_space = [&](std::size_t i) {
    if (tokens[i].kind == TokenKind::kWhitespace) {
      dropped[i] = true;
      return true;
    }
    return false;
  };

  for (int w = 0; w < mask.size(); ++w) {
    if (mask.kept(w)) continue;
    const std::size_t p = text.word_token_position(w);
    dropped[p] = true;
    // Neighbours are looked up in the output, so skip what is already gone.
    std::size_t next = p + 1;
    while (next < n && dropped[next]) ++next;
    if (next < n && drop_if_space(next)) continue;
    std::size_t prev = p;
    while (prev > 0 && dropped[prev - 1]) --prev;
    if (prev > 0) drop_if_space(prev - 1);
  }

  std::string out;
  out.reserve(text.original().size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!dropped[i]) out += tokens[i].surface;
  }
  return out;
}

std::string Substitute(const TokenizedText& text,
                       std::span<const WordSwap> swaps) {
  std::unordered_map<std::size_t, const std::string*> by_token;
  for (const WordSwap& swap : swaps) {
    const std::size_t p = text.word_token_position(swap.word_index);
    if (!by_token.emplace(p, &swap.replacement).second) {
      throw InvalidArgumentError("word index " +
                                 std::to_string(swap.word_index) +
                                 " swapped more than once");
    }
  }
  std::string out;
  out.reserve(text.original().size());
  const auto tokens = text.tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = by_token.find(i);
    out += it == by_token.end() ? tokens[i].surface : *it->second;
  }
  return out;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string AsciiUpper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

}  // namespace greybox
