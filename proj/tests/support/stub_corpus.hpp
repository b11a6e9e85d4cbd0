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

// Deterministic synthetic corpus plus a matching stub table.
//
// Content words are CVCVC strings whose Porter stems are the words
// themselves, so no two are morphological derivations of each other. Each
// synonym group has scores {0.99, 0.98, 0.90}: its top two words are
// interchangeable carriers and the third never carries. Filler words sit in
// singleton groups, so they are single-piece but never carry.

#ifndef CTXMARK_TESTS_SUPPORT_STUB_CORPUS_HPP_
#define CTXMARK_TESTS_SUPPORT_STUB_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace ctxmark::testing {

struct CorpusOptions {
  std::size_t sentences = 1000;
  std::size_t groups = 120;
  std::size_t fillers = 80;
  std::uint64_t seed = 1;
  // Cover text uses only each group's highest-scoring word.
  bool top_words_only = false;
};

struct StubCorpus {
  std::string table;  // stub table TSV
  std::string text;   // one sentence per line
  std::vector<std::array<std::string, 3>> groups;
  std::vector<std::string> fillers;
};

inline StubCorpus make_stub_corpus(const CorpusOptions& opts = {}) {
  static constexpr char kConsonants[] = "bdgkmptvz";
  static constexpr char kVowels[] = "aiou";
  static const std::array<const char*, 10> kStopwords = {"the", "of", "and", "to", "in",
                                                         "with", "for", "on", "at", "by"};
  static const std::array<const char*, 4> kOpeners = {"Then", "Later", "Still", "Now"};

  std::mt19937_64 rng(opts.seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  std::set<std::string> used;
  auto fresh_word = [&] {
    while (true) {
      std::string w;
      for (int i = 0; i < 5; ++i) w.push_back(i % 2 == 0 ? kConsonants[pick(9)] : kVowels[pick(4)]);
      if (used.insert(w).second) return w;
    }
  };

  StubCorpus out;
  for (std::size_t g = 0; g < opts.groups; ++g) {
    out.groups.push_back({fresh_word(), fresh_word(), fresh_word()});
    const auto& grp = out.groups.back();
    const std::string id = "g" + std::to_string(g);
    out.table += id + "\t" + grp[0] + "\t0.99\n";
    out.table += id + "\t" + grp[1] + "\t0.98\n";
    out.table += id + "\t" + grp[2] + "\t0.90\n";
  }
  for (std::size_t f = 0; f < opts.fillers; ++f) {
    out.fillers.push_back(fresh_word());
    out.table += "f" + std::to_string(f) + "\t" + out.fillers.back() + "\t0.50\n";
  }

  for (std::size_t s = 0; s < opts.sentences; ++s) {
    std::string line = kOpeners[pick(kOpeners.size())];
    const std::size_t len = 6 + pick(9);
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t roll = pick(10);
      line += ' ';
      if (roll < 3) {
        line += kStopwords[pick(kStopwords.size())];
      } else if (roll < 6) {
        line += out.fillers[pick(out.fillers.size())];
      } else {
        const auto& grp = out.groups[pick(out.groups.size())];
        const std::size_t variant = opts.top_words_only ? 0 : pick(5) % 3;
        line += grp[variant];
      }
      if (t + 1 < len && pick(12) == 0) line += " ,";
    }
    line += " .\n";
    out.text += line;
  }
  return out;
}

}  // namespace ctxmark::testing

#endif  // CTXMARK_TESTS_SUPPORT_STUB_CORPUS_HPP_
