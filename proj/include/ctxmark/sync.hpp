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

// Synchronicity and substitutability tests: the checks that let the
// extractor, which only sees the watermarked text, find the same carrier
// words and rebuild the same candidate pairs as the embedder.

#ifndef CTXMARK_SYNC_HPP_
#define CTXMARK_SYNC_HPP_

#include <optional>
#include <string>
#include <utility>

#include "ctxmark/backend.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/lexsub.hpp"
#include "ctxmark/risk.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

inline constexpr double kDefaultSrThreshold = 0.95;

struct SyncOptions {
  std::size_t k = kDefaultCandidateCount;
  double sr_threshold = kDefaultSrThreshold;
};

// Top two ranked candidates above the SR threshold, in ranking order.
struct FinalCandidates {
  ScoredCandidate first;
  ScoredCandidate second;
};

// A candidate pair in ascending code-point order: c1 < c2. c1 encodes bit 0.
class CandidatePair {
 public:
  CandidatePair(std::string a, std::string b) {
    if (a == b) throw ContractViolation("CandidatePair: words must differ");
    if (b < a) std::swap(a, b);
    c1_ = std::move(a);
    c2_ = std::move(b);
  }

  const std::string& c1() const { return c1_; }
  const std::string& c2() const { return c2_; }
  bool contains(const std::string& w) const { return w == c1_ || w == c2_; }
  const std::string& word_for(int bit) const { return bit == 0 ? c1_ : c2_; }

  // 0 for c1, 1 for c2, nullopt for anything else.
  std::optional<int> bit_of(const std::string& w) const {
    if (w == c1_) return 0;
    if (w == c2_) return 1;
    return std::nullopt;
  }

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;

 private:
  std::string c1_;
  std::string c2_;
};

struct SyncResult {
  bool sync = false;
  bool target_in_candidates = false;
  std::optional<CandidatePair> candidates;  // Sort(FC); absent without two finalists
};

inline std::optional<FinalCandidates> final_candidates(const RankedCandidates& rw, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ContractViolation("final_candidates: threshold must be in (0, 1)");
  }
  std::optional<ScoredCandidate> first;
  for (const auto& c : rw.ranked) {
    if (!(c.sr_score > threshold)) continue;
    if (!first) {
      first = c;
    } else {
      return FinalCandidates{*first, c};
    }
  }
  return std::nullopt;
}

inline std::optional<CandidatePair> sorted_finalists(const TokenSeq& context, Position i,
                                                     const ModelBackend& backend,
                                                     const SyncOptions& opts) {
  auto fc = final_candidates(lexical_substitution(context, i, opts.k, backend), opts.sr_threshold);
  if (!fc) return std::nullopt;
  return CandidatePair(fc->first.word, fc->second.word);
}

// ST(i, L). Builds FC for t_i in L, then FC_1 and FC_2 from L with t_i
// replaced by each finalist. sync holds iff t_i is a finalist and the three
// sorted pairs are equal. The recursion is one level deep.
inline SyncResult synchronicity_test(Position i, const TokenSeq& local_context,
                                     const ModelBackend& backend, const SyncOptions& opts) {
  SyncResult out;
  auto fc = final_candidates(lexical_substitution(local_context, i, opts.k, backend),
                             opts.sr_threshold);
  if (!fc) return out;
  const CandidatePair pair(fc->first.word, fc->second.word);
  out.candidates = pair;
  out.target_in_candidates = pair.contains(local_context.word(i));
  if (!out.target_in_candidates) return out;

  for (const auto* w : {&fc->first.word, &fc->second.word}) {
    const TokenSeq substituted = local_context.with_word(i, *w);
    // L itself when the finalist is t_i; its FC is the one just computed.
    if (substituted == local_context) continue;
    const auto again = sorted_finalists(substituted, i, backend, opts);
    if (!again || !(*again == pair)) return out;
  }
  out.sync = true;
  return out;
}

// Whether putting either candidate at i would make t_{i-1} pass the
// synchronicity test against its new next word. If it would, the extractor's
// left-to-right scan could stop at i-1 instead of i, so i must not carry a
// bit. `local_context` is {t_1..t_{i+1}} (only t_1..t_{i-1} are read).
inline bool substitutability_test(Position i, const TokenSeq& local_context,
                                  const CandidatePair& candidates, const ModelBackend& backend,
                                  const RiskConfig& risk, const SyncOptions& opts) {
  if (i < 2) throw ContractViolation("substitutability_test: position must be >= 2");
  // The scan starts at t_2, so t_1 never carries; risk tokens never do either.
  if (i - 1 < 2) return true;
  const std::string& previous = local_context.word(i - 1);
  if (is_risk_token(previous, risk, backend)) return true;

  const TokenSeq head = local_context.prefix(i);
  for (const auto* c : {&candidates.c1(), &candidates.c2()}) {
    const TokenSeq new_context = head.with_word(i, *c);
    const SyncResult r = synchronicity_test(i - 1, new_context, backend, opts);
    if (r.sync && r.candidates && r.candidates->contains(previous)) return false;
  }
  return true;
}

}  // namespace ctxmark

#endif  // CTXMARK_SYNC_HPP_
