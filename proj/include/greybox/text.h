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

// Tokenization and word-level perturbation of sentences.
//
// A word is a maximal run of alphanumeric code points, with apostrophes
// allowed between two alphanumerics ("don't" is one word). Non-ASCII code
// points count as alphanumeric unless they fall in a Unicode punctuation
// block, so homoglyph-substituted words stay single tokens. Whitespace runs
// are one token; every other code point is its own punctuation token.
// Tokens carry byte spans into the original string, so concatenating their
// surfaces reproduces the input exactly.

#ifndef GREYBOX_TEXT_H_
#define GREYBOX_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace greybox {

enum class TokenKind { kWord, kPunctuation, kWhitespace };

struct Token {
  std::string surface;
  std::size_t start = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
  TokenKind kind = TokenKind::kPunctuation;
  std::optional<int> word_index;  // dense over word tokens only

  bool is_word() const { return kind == TokenKind::kWord; }
};

class TokenizedText {
 public:
  TokenizedText() = default;

  const std::string& original() const { return original_; }
  std::span<const Token> tokens() const { return tokens_; }
  int word_count() const { return static_cast<int>(word_tokens_.size()); }

  // The i-th word token. Throws IndexOutOfRangeError.
  const Token& word(int i) const;
  // Position of the i-th word in tokens().
  std::size_t word_token_position(int i) const;

  std::vector<std::string> words() const;
  std::string Detokenize() const;

 private:
  friend TokenizedText Tokenize(std::string_view text);

  std::string original_;
  std::vector<Token> tokens_;
  std::vector<std::size_t> word_tokens_;
};

TokenizedText Tokenize(std::string_view text);

// Binary vector over the words of a sentence: 1 keeps the word, 0 drops it.
class PerturbationMask {
 public:
  PerturbationMask() = default;
  explicit PerturbationMask(std::vector<std::uint8_t> bits);

  static PerturbationMask AllOnes(int word_count);

  int size() const { return static_cast<int>(bits_.size()); }
  bool kept(int i) const { return bits_[i] != 0; }
  void set(int i, bool keep) { bits_[i] = keep ? 1 : 0; }
  int kept_count() const;
  std::span<const std::uint8_t> bits() const { return bits_; }

  friend bool operator==(const PerturbationMask&,
                         const PerturbationMask&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Renders the sentence with every 0-bit word deleted. A deleted word takes
// the whitespace run that follows it, or the one before it when no
// whitespace follows. Throws LengthMismatchError.
std::string ApplyMask(const TokenizedText& text, const PerturbationMask& mask);

struct WordSwap {
  int word_index = 0;
  std::string replacement;
};

// Replaces the targeted words and leaves every other byte untouched.
// Throws IndexOutOfRangeError, or InvalidArgumentError on repeated indices.
std::string Substitute(const TokenizedText& text,
                       std::span<const WordSwap> swaps);

namespace utf8 {

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes one code point at `pos` and advances it. Invalid sequences decode
// as a single byte mapped to U+FFFD.
char32_t Next(std::string_view s, std::size_t& pos);
std::u32string Decode(std::string_view s);
void Append(std::string& out, char32_t cp);
std::string Encode(std::u32string_view cps);

}  // namespace utf8

std::string AsciiLower(std::string_view s);
std::string AsciiUpper(std::string_view s);

}  // namespace greybox

#endif  // GREYBOX_TEXT_H_
