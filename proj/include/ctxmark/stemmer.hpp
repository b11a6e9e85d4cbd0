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

// Porter's suffix-stripping stemmer, original 1980 rule set (step 2 uses
// "abli" -> "able"; none of the later additions such as "logi"). Lowercase
// ASCII input; words of length <= 2 are returned unchanged.

#ifndef CTXMARK_STEMMER_HPP_
#define CTXMARK_STEMMER_HPP_

#include <string>
#include <string_view>

#include "ctxmark/text.hpp"

namespace ctxmark {

namespace porter_detail {

class Stemmer {
 public:
  explicit Stemmer(std::string w) : b_(std::move(w)) {}

  std::string run() {
    if (b_.size() <= 2) return b_;
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return b_;
  }

 private:
  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Measure m of b_[0, len): number of VC sequences.
  int measure(std::size_t len) const {
    int n = 0;
    std::size_t i = 0;
    while (i < len && cons(i)) ++i;
    while (i < len) {
      while (i < len && !cons(i)) ++i;
      if (i >= len) break;
      while (i < len && cons(i)) ++i;
      ++n;
    }
    return n;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_cons(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && cons(len - 1);
  }

  // *o: stem ends cvc, where the final c is not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3 || !cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const {
    return b_.size() >= s.size() && std::string_view(b_).substr(b_.size() - s.size()) == s;
  }

  std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

  void set_to(std::string_view suffix, std::string_view repl) {
    b_.resize(stem_len(suffix));
    b_ += repl;
  }

  // Replace `suffix` with `repl` when the remaining stem has measure > min_m.
  bool rule(std::string_view suffix, std::string_view repl, int min_m) {
    if (!ends(suffix)) return false;
    if (measure(stem_len(suffix)) > min_m) set_to(suffix, repl);
    return true;
  }

  void step1ab() {
    if (ends("sses")) {
      set_to("sses", "ss");
    } else if (ends("ies")) {
      set_to("ies", "i");
    } else if (ends("ss")) {
      // unchanged
    } else if (ends("s")) {
      set_to("s", "");
    }

    bool extra = false;
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) set_to("eed", "ee");
    } else if (ends("ed") && has_vowel(stem_len("ed"))) {
      set_to("ed", "");
      extra = true;
    } else if (ends("ing") && has_vowel(stem_len("ing"))) {
      set_to("ing", "");
      extra = true;
    }
    if (!extra) return;
    if (ends("at")) {
      set_to("at", "ate");
    } else if (ends("bl")) {
      set_to("bl", "ble");
    } else if (ends("iz")) {
      set_to("iz", "ize");
    } else if (double_cons(b_.size())) {
      const char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
      b_ += 'e';
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(stem_len("y"))) b_.back() = 'i';
  }

  void step2() {
    static constexpr std::string_view kRules[][2] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"}};
    for (const auto& r : kRules) {
      if (rule(r[0], r[1], 0)) return;
    }
  }

  void step3() {
    static constexpr std::string_view kRules[][2] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
    for (const auto& r : kRules) {
      if (rule(r[0], r[1], 0)) return;
    }
  }

  void step4() {
    static constexpr std::string_view kSuffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    // Longest match wins, e.g. "ement" over "ment" over "ent".
    std::string_view best;
    for (auto s : kSuffixes) {
      if (ends(s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    const std::size_t len = stem_len(best);
    if (measure(len) <= 1) return;
    if (best == "ion" && !(len > 0 && (b_[len - 1] == 's' || b_[len - 1] == 't'))) return;
    b_.resize(len);
  }

  void step5() {
    if (ends("e")) {
      const std::size_t len = stem_len("e");
      const int m = measure(len);
      if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
    }
    if (measure(b_.size()) > 1 && double_cons(b_.size()) && b_.back() == 'l') b_.pop_back();
  }

  std::string b_;
};

}  // namespace porter_detail

inline std::string porter_stem(std::string_view word) {
  return porter_detail::Stemmer(ascii_lower(word)).run();
}

// Two distinct surface forms sharing a stem ("night"/"nights", "Night"/"night").
inline bool is_morphological_derivation(std::string_view a, std::string_view b) {
  return a != b && porter_stem(a) == porter_stem(b);
}

}  // namespace ctxmark

#endif  // CTXMARK_STEMMER_HPP_
