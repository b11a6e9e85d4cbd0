//
// Copyright 2026 The ctxmark Authors
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

// Document model, tokenizer, sentence splitter and detokenizer.
//
// Positions inside a TokenSeq are 1-based throughout the library: word(1) is
// the first token of the sentence, word(size()) the last one.

#ifndef CTXMARK_TEXT_HPP_
#define CTXMARK_TEXT_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ctxmark/errors.hpp"

namespace ctxmark {

// 1-based token index.
using Position = std::size_t;

inline constexpr std::string_view kMaskToken = "[MASK]";

class TokenSeq {
 public:
  TokenSeq() = default;
  explicit TokenSeq(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    for (const auto& t : tokens_) {
      if (t.empty()) throw ContractViolation("TokenSeq: empty token");
    }
  }
  TokenSeq(std::initializer_list<std::string> tokens)
      : TokenSeq(std::vector<std::string>(tokens)) {}

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  const std::string& word(Position i) const {
    check(i);
    return tokens_[i - 1];
  }

  // Copy with token i replaced by `w`.
  TokenSeq with_word(Position i, std::string w) const {
    check(i);
    if (w.empty()) throw ContractViolation("TokenSeq: empty replacement");
    TokenSeq out = *this;
    out.tokens_[i - 1] = std::move(w);
    return out;
  }

  TokenSeq masked(Position i) const { return with_word(i, std::string(kMaskToken)); }

  // First n tokens (t_1..t_n).
  TokenSeq prefix(std::size_t n) const {
    if (n > tokens_.size()) throw ContractViolation("TokenSeq: prefix longer than sequence");
    TokenSeq out;
    out.tokens_.assign(tokens_.begin(), tokens_.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;

 private:
  void check(Position i) const {
    if (i < 1 || i > tokens_.size()) {
      throw ContractViolation("TokenSeq: position " + std::to_string(i) +
                              " out of range 1.." + std::to_string(tokens_.size()));
    }
  }

  std::vector<std::string> tokens_;
};

struct Document {
  std::vector<TokenSeq> sentences;
  std::string source_text;
};

namespace text_detail {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset of the first byte
  std::size_t length;  // bytes
};

// Lenient UTF-8 decoder: malformed bytes decode to U+FFFD one byte at a time.
inline std::vector<CodePoint> decode_utf8(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = 0xFFFD;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 >> 5) == 0x6) {
      len = 2;
    } else if ((b0 >> 4) == 0xE) {
      len = 3;
    } else if ((b0 >> 3) == 0x1E) {
      len = 4;
    } else {
      len = 0;
    }
    if (len > 1) {
      bool ok = i + len <= s.size();
      char32_t v = b0 & (0xFF >> (len + 1));
      for (std::size_t k = 1; ok && k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b >> 6) != 0x2) {
          ok = false;
        } else {
          v = (v << 6) | (b & 0x3F);
        }
      }
      if (ok) {
        cp = v;
      } else {
        len = 1;
        cp = 0xFFFD;
      }
    } else if (len == 0) {
      len = 1;
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

inline bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
         c == 0x00A0 || c == 0x2028 || c == 0x2029 || c == 0x3000;
}

// Letters and digits. ASCII is classified exactly; outside ASCII only the
// common punctuation/symbol blocks count as non-word characters.
inline bool is_word_char(char32_t c) {
  if (c < 0x80) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  }
  if (c >= 0x00A1 && c <= 0x00BF) {
    switch (c) {
      case 0x00AA: case 0x00B2: case 0x00B3: case 0x00B5:
      case 0x00B9: case 0x00BA: case 0x00BC: case 0x00BD: case 0x00BE:
        return true;
      default:
        return false;
    }
  }
  if (c == 0x00D7 || c == 0x00F7) return false;
  if (c >= 0x2000 && c <= 0x206F) return false;  // general punctuation
  if (c >= 0x20A0 && c <= 0x20CF) return false;  // currency
  if (c >= 0x2190 && c <= 0x23FF) return false;  // arrows, math, technical
  if (c >= 0x2500 && c <= 0x27BF) return false;  // boxes, shapes, dingbats
  if (c >= 0x3000 && c <= 0x303F) return false;  // CJK punctuation
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c == 0xFFFD) return false;
  return true;
}

inline constexpr std::array<std::string_view, 48> kAbbreviations = {
    "mr.",   "mrs.",  "ms.",    "dr.",   "prof.", "sr.",  "jr.",   "st.",
    "vs.",   "etc.",  "e.g.",   "i.e.",  "u.s.",  "u.k.", "inc.",  "ltd.",
    "co.",   "corp.", "jan.",   "feb.",  "mar.",  "apr.", "jun.",  "jul.",
    "aug.",  "sep.",  "sept.",  "oct.",  "nov.",  "dec.", "no.",   "mt.",
    "gen.",  "gov.",  "capt.",  "col.",  "lt.",   "sgt.", "rev.",  "fig.",
    "al.",   "approx.", "dept.", "est.", "vol.",  "p.m.", "a.m.",  "cf."};

}  // namespace text_detail

// ASCII lowercase. Non-ASCII bytes are left untouched.
inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

// True iff the token contains no letter or digit.
inline bool is_punctuation(std::string_view token) {
  for (const auto& cp : text_detail::decode_utf8(token)) {
    if (text_detail::is_word_char(cp.value)) return false;
  }
  return true;
}

inline bool is_abbreviation(std::string_view token) {
  const std::string lower = ascii_lower(token);
  return std::find(text_detail::kAbbreviations.begin(), text_detail::kAbbreviations.end(),
                   lower) != text_detail::kAbbreviations.end();
}

struct TokenSpan {
  std::string text;
  std::size_t offset;  // byte offset into the source text
};

// Word-level tokenizer. Each whitespace-delimited chunk is split into
// leading punctuation marks, a core, and trailing punctuation marks (one
// token per mark). Chunks made only of punctuation ("@-@", "...") and
// listed abbreviations ("Mr.") stay whole. The output is a fixed point:
// tokenizing the space-joined tokens reproduces them exactly.
inline std::vector<TokenSpan> tokenize_with_offsets(std::string_view raw) {
  using text_detail::CodePoint;
  const std::vector<CodePoint> cps = text_detail::decode_utf8(raw);
  std::vector<TokenSpan> out;

  auto emit = [&](std::size_t first, std::size_t last) {  // [first, last) in cps
    const std::size_t begin = cps[first].offset;
    const std::size_t end = cps[last - 1].offset + cps[last - 1].length;
    out.push_back({std::string(raw.substr(begin, end - begin)), begin});
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    if (text_detail::is_space(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !text_detail::is_space(cps[j].value)) ++j;

    bool any_word = false;
    for (std::size_t k = i; k < j; ++k) any_word |= text_detail::is_word_char(cps[k].value);
    if (!any_word) {
      emit(i, j);
      i = j;
      continue;
    }

    std::size_t lo = i;
    while (!text_detail::is_word_char(cps[lo].value)) {
      emit(lo, lo + 1);
      ++lo;
    }
    std::size_t hi = j;
    std::vector<std::size_t> trailing;
    auto core_text = [&]() {
      return raw.substr(cps[lo].offset, cps[hi - 1].offset + cps[hi - 1].length - cps[lo].offset);
    };
    while (!text_detail::is_word_char(cps[hi - 1].value) && !is_abbreviation(core_text())) {
      --hi;
      trailing.push_back(hi);
    }
    emit(lo, hi);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) emit(*it, *it + 1);
    i = j;
  }
  return out;
}

inline std::vector<std::string> tokenize(std::string_view raw) {
  std::vector<std::string> out;
  for (auto& span : tokenize_with_offsets(raw)) out.push_back(std::move(span.text));
  return out;
}

namespace text_detail {

inline bool is_terminal(std::string_view token) {
  if (token.empty()) return false;
  for (const auto& cp : decode_utf8(token)) {
    if (cp.value != '.' && cp.value != '!' && cp.value != '?' && cp.value != 0x2026) return false;
  }
  return true;
}

inline bool starts_upper(std::string_view token) {
  return !token.empty() && token.front() >= 'A' && token.front() <= 'Z';
}

inline bool is_closer(std::string_view t) {
  return t == ")" || t == "]" || t == "}" || t == "''" || t == "”" || t == "’" ||
         t == "»";
}

inline bool is_opener(std::string_view t) {
  return t == "(" || t == "[" || t == "``" || t == "“" || t == "‘" || t == "«" ||
         t == "\"" || t == "'";
}

inline bool is_ambiguous_quote(std::string_view t) { return t == "\"" || t == "'"; }

}  // namespace text_detail

// Splits a token stream into sentences. A sentence ends after a terminal
// mark (. ! ? ...) plus any closing brackets/quotes, when the next token
// starts with an uppercase ASCII letter, or is an opening bracket/quote
// followed by such a token. Straight quotes close when the sentence holds an
// odd number of them.
inline std::vector<TokenSeq> split_token_stream(const std::vector<std::string>& tokens) {
  using namespace text_detail;
  std::vector<TokenSeq> out;
  std::vector<std::string> current;
  auto flush = [&]() {
    if (!current.empty()) out.emplace_back(std::move(current));
    current.clear();
  };
  auto opens_sentence = [&](std::size_t k) {
    if (k >= tokens.size()) return false;
    if (starts_upper(tokens[k])) return true;
    return is_opener(tokens[k]) && k + 1 < tokens.size() && starts_upper(tokens[k + 1]);
  };

  std::size_t k = 0;
  while (k < tokens.size()) {
    current.push_back(tokens[k]);
    ++k;
    if (!is_terminal(current.back())) continue;
    while (k < tokens.size()) {
      if (is_terminal(tokens[k]) || is_closer(tokens[k])) {
        current.push_back(tokens[k++]);
        continue;
      }
      if (is_ambiguous_quote(tokens[k])) {
        const auto n = std::count(current.begin(), current.end(), tokens[k]);
        if (n % 2 == 1) {
          current.push_back(tokens[k++]);
          continue;
        }
      }
      break;
    }
    if (opens_sentence(k)) flush();
  }
  flush();
  return out;
}

inline std::vector<TokenSeq> split_sentences(std::string_view raw) {
  return split_token_stream(tokenize(raw));
}

// Tokens joined by single spaces.
inline std::string detokenize(const TokenSeq& seq) {
  std::string out;
  for (const auto& t : seq.tokens()) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

inline Document make_document(std::string raw) {
  Document doc;
  doc.sentences = split_sentences(raw);
  doc.source_text = std::move(raw);
  return doc;
}

// One detokenized sentence per line, LF-terminated.
inline std::string render_document(const Document& doc) {
  std::string out;
  for (const auto& s : doc.sentences) {
    out += detokenize(s);
    out.push_back('\n');
  }
  return out;
}

inline std::size_t count_tokens(const Document& doc) {
  std::size_t n = 0;
  for (const auto& s : doc.sentences) n += s.size();
  return n;
}

inline std::size_t count_words(const Document& doc) {
  std::size_t n = 0;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens()) n += is_punctuation(t) ? 0 : 1;
  }
  return n;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Stopword list plus the version id every report carries.
struct RiskConfig {
  std::unordered_set<std::string> stopwords;
  std::string version_id;

  bool is_stopword(std::string_view token) const {
    return stopwords.count(ascii_lower(token)) != 0;
  }
};

// Stopword file: header `#version:<id>`, then one lowercase word per line.
// Blank lines and further `#` lines are ignored.
inline RiskConfig parse_stopwords(std::string_view content, const std::string& source = "<memory>") {
  RiskConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header = false;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      constexpr std::string_view kPrefix = "#version:";
      if (line.substr(0, kPrefix.size()) != kPrefix || line.size() == kPrefix.size()) {
        throw SchemaError(source + ":1: missing `#version:<id>` header");
      }
      cfg.version_id = std::string(line.substr(kPrefix.size()));
      header = true;
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    if (ascii_lower(line) != line || line.find_first_of(" \t") != std::string_view::npos) {
      throw SchemaError(source + ":" + std::to_string(line_no) +
                        ": stopword must be a single lowercase word");
    }
    cfg.stopwords.emplace(line);
  }
  if (!header) throw SchemaError(source + ": empty stopword file");
  return cfg;
}

inline RiskConfig load_stopwords(const std::string& path) {
  return parse_stopwords(read_file(path), path);
}

#ifdef CTXMARK_DATA_DIR
inline std::string default_stopwords_path() {
  return std::string(CTXMARK_DATA_DIR) + "/stopwords_en_v1.txt";
}
#endif

}  // namespace ctxmark

#endif  // CTXMARK_TEXT_HPP_
