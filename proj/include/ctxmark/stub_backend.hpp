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

// Table-driven deterministic backend. Every answer can be worked out by hand
// from the table file, which makes it the reference oracle for the codec.
//
// Table file: UTF-8 lines `group_id<TAB>word<TAB>score[<TAB>condition]`.
// Lines sharing a group_id form one synonym group. The optional condition
// (`next=WORD` or `prev=WORD`) activates the group only when the token after
// (before) the queried slot equals WORD; a matching conditional group takes
// precedence over the word's unconditional group. Blank lines and lines
// starting with `#` are ignored.
//
// Stub rules:
//   fill_mask_ranked  the active group of the reference word, by score
//   entailment        1.0 if equal; 0.99 if the sentences differ at exactly
//                     one slot and the hypothesis word is in the premise
//                     word's active group there; otherwise 0.2
//   similarity        1 - 0.01 * (differing slots), floored at -1
//   token_probability score of the word in its active group at the slot, else 0
//   is_single_piece   the word appears in some group

#ifndef CTXMARK_STUB_BACKEND_HPP_
#define CTXMARK_STUB_BACKEND_HPP_

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxmark/backend.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

inline constexpr double kStubSameGroupEntailment = 0.99;
inline constexpr double kStubOtherEntailment = 0.2;
inline constexpr double kStubSimilarityStep = 0.01;

struct StubCondition {
  enum class Kind { kNone, kPrev, kNext };
  Kind kind = Kind::kNone;
  std::string word;

  bool holds(const std::string* prev, const std::string* next) const {
    switch (kind) {
      case Kind::kNone:
        return true;
      case Kind::kPrev:
        return prev != nullptr && *prev == word;
      case Kind::kNext:
        return next != nullptr && *next == word;
    }
    return false;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::kPrev:
        return "prev=" + word;
      case Kind::kNext:
        return "next=" + word;
      default:
        return "";
    }
  }

  friend bool operator==(const StubCondition&, const StubCondition&) = default;
};

struct StubEntry {
  std::string word;
  double score;
};

struct StubGroup {
  std::string id;
  StubCondition condition;
  std::vector<StubEntry> entries;  // sorted by score descending

  const StubEntry* find(std::string_view w) const {
    for (const auto& e : entries) {
      if (e.word == w) return &e;
    }
    return nullptr;
  }
};

class StubTable {
 public:
  static StubTable parse(std::string_view content, const std::string& source = "<memory>") {
    StubTable table;
    std::map<std::string, std::size_t> by_id;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) {
      throw SchemaError(source + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (pos < content.size()) {
      std::size_t nl = content.find('\n', pos);
      if (nl == std::string_view::npos) nl = content.size();
      std::string_view line = content.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;

      std::vector<std::string> cols;
      std::size_t start = 0;
      while (true) {
        const std::size_t tab = line.find('\t', start);
        cols.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos
                                                                          : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
      }
      if (cols.size() != 3 && cols.size() != 4) fail("expected 3 or 4 tab-separated columns");
      if (cols[0].empty() || cols[1].empty()) fail("empty group id or word");

      char* end = nullptr;
      const double score = std::strtod(cols[2].c_str(), &end);
      if (cols[2].empty() || end != cols[2].c_str() + cols[2].size()) fail("bad score");
      if (!(score > 0.0 && score <= 1.0)) fail("score must be in (0, 1]");

      StubCondition cond;
      if (cols.size() == 4 && !cols[3].empty()) {
        if (cols[3].rfind("next=", 0) == 0) {
          cond.kind = StubCondition::Kind::kNext;
        } else if (cols[3].rfind("prev=", 0) == 0) {
          cond.kind = StubCondition::Kind::kPrev;
        } else {
          fail("condition must be next=WORD or prev=WORD");
        }
        cond.word = cols[3].substr(5);
        if (cond.word.empty()) fail("empty condition word");
      }

      auto [it, inserted] = by_id.emplace(cols[0], table.groups_.size());
      if (inserted) {
        table.groups_.push_back({cols[0], cond, {}});
      }
      StubGroup& group = table.groups_[it->second];
      if (!(group.condition == cond)) fail("condition differs within group " + cols[0]);
      for (const auto& e : group.entries) {
        if (e.word == cols[1]) fail("duplicate word in group " + cols[0]);
        if (e.score == score) fail("duplicate score in group " + cols[0]);
      }
      group.entries.push_back({cols[1], score});
    }

    for (std::size_t g = 0; g < table.groups_.size(); ++g) {
      auto& group = table.groups_[g];
      std::stable_sort(group.entries.begin(), group.entries.end(),
                       [](const StubEntry& a, const StubEntry& b) { return a.score > b.score; });
      for (const auto& e : group.entries) {
        auto& slots = table.index_[e.word];
        for (std::size_t other : slots) {
          if (table.groups_[other].condition == group.condition) {
            throw SchemaError(source + ": word '" + e.word + "' in groups '" +
                              table.groups_[other].id + "' and '" + group.id +
                              "' under the same condition");
          }
        }
        slots.push_back(g);
      }
    }
    return table;
  }

  static StubTable load(const std::string& path) { return parse(read_file(path), path); }

  const std::vector<StubGroup>& groups() const { return groups_; }

  bool contains(std::string_view word) const { return index_.count(std::string(word)) != 0; }

  // The group answering for `word` given its neighbours (null at sentence edges).
  const StubGroup* active_group(const std::string& word, const std::string* prev,
                                const std::string* next) const {
    auto it = index_.find(word);
    if (it == index_.end()) return nullptr;
    const StubGroup* fallback = nullptr;
    for (std::size_t g : it->second) {
      const StubGroup& group = groups_[g];
      if (group.condition.kind == StubCondition::Kind::kNone) {
        fallback = &group;
      } else if (group.condition.holds(prev, next)) {
        return &group;
      }
    }
    return fallback;
  }

  // Canonical text form; independent of comments, spacing and line order
  // within a group.
  std::string canonical() const {
    std::string out;
    char buf[32];
    for (const auto& g : groups_) {
      for (const auto& e : g.entries) {
        std::snprintf(buf, sizeof buf, "%.17g", e.score);
        out += g.id + '\t' + e.word + '\t' + buf + '\t' + g.condition.to_string() + '\n';
      }
    }
    return out;
  }

 private:
  std::vector<StubGroup> groups_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class StubBackend final : public ModelBackend {
 public:
  explicit StubBackend(StubTable table) : table_(std::move(table)) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(table_.canonical())));
    id_ = std::string("stub-") + buf;
  }

  static StubBackend from_file(const std::string& path) { return StubBackend(StubTable::load(path)); }

  const StubTable& table() const { return table_; }

  std::string backend_id() const override { return id_; }

  std::vector<MaskedPrediction> fill_mask_ranked(const TokenSeq& reference, const TokenSeq& masked,
                                                 Position mask_index,
                                                 std::size_t top_k) const override {
    check_mask_query(reference, masked, mask_index, top_k);
    const StubGroup* group = group_at(reference, mask_index, reference.word(mask_index));
    std::vector<MaskedPrediction> out;
    if (group == nullptr) return out;
    for (const auto& e : group->entries) out.push_back({e.word, e.score});
    sort_predictions(out);
    if (out.size() > top_k) out.resize(top_k);
    return out;
  }

  double entailment_probability(const TokenSeq& premise, const TokenSeq& hypothesis) const override {
    if (premise.empty() || hypothesis.empty()) {
      throw ContractViolation("entailment_probability: empty sentence");
    }
    if (premise == hypothesis) return 1.0;
    if (premise.size() != hypothesis.size()) return kStubOtherEntailment;
    Position diff = 0;
    for (Position p = 1; p <= premise.size(); ++p) {
      if (premise.word(p) != hypothesis.word(p)) {
        if (diff != 0) return kStubOtherEntailment;
        diff = p;
      }
    }
    const StubGroup* group = group_at(premise, diff, premise.word(diff));
    if (group != nullptr && group->find(hypothesis.word(diff)) != nullptr) {
      return kStubSameGroupEntailment;
    }
    return kStubOtherEntailment;
  }

  double sentence_similarity(const TokenSeq& a, const TokenSeq& b) const override {
    if (a.empty() || b.empty()) throw ContractViolation("sentence_similarity: empty sentence");
    const std::size_t common = std::min(a.size(), b.size());
    std::size_t diffs = std::max(a.size(), b.size()) - common;
    for (Position p = 1; p <= common; ++p) diffs += a.word(p) != b.word(p) ? 1 : 0;
    return std::max(-1.0, 1.0 - kStubSimilarityStep * static_cast<double>(diffs));
  }

  double token_probability(const TokenSeq& masked, Position mask_index,
                           const std::string& word) const override {
    check_mask_slot(masked, mask_index);
    const StubGroup* group = group_at(masked, mask_index, word);
    if (group == nullptr) return 0.0;
    return group->find(word)->score;
  }

  bool is_single_piece(const std::string& word) const override { return table_.contains(word); }

 private:
  const StubGroup* group_at(const TokenSeq& seq, Position i, const std::string& word) const {
    const std::string* prev = i > 1 ? &seq.word(i - 1) : nullptr;
    const std::string* next = i < seq.size() ? &seq.word(i + 1) : nullptr;
    return table_.active_group(word, prev, next);
  }

  StubTable table_;
  std::string id_;
};

}  // namespace ctxmark

#endif  // CTXMARK_STUB_BACKEND_HPP_
