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

// Context-aware lexical substitution: masked-word candidates conditioned on
// the full original sentence, re-ranked by how strongly the original
// sentence entails the substituted one (the SR score).

#ifndef CTXMARK_LEXSUB_HPP_
#define CTXMARK_LEXSUB_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "ctxmark/backend.hpp"
#include "ctxmark/stemmer.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

inline constexpr std::size_t kDefaultCandidateCount = 32;

struct ScoredCandidate {
  std::string word;
  double probability = 0.0;  // generation probability, unnormalized
  double sr_score = 0.0;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

struct RankedCandidates {
  Position target_index = 0;
  std::vector<MaskedPrediction> initial;  // W, by generation probability
  std::vector<ScoredCandidate> ranked;    // RW, by SR score
};

// SR descending; equal SR keeps generation order (probability descending,
// then code point).
inline bool sr_order(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.sr_score != b.sr_score) return a.sr_score > b.sr_score;
  if (a.probability != b.probability) return a.probability > b.probability;
  return a.word < b.word;
}

// Top-K masked-word predictions for position i of S, with morphological
// derivations of t_i removed. The backend is asked for 2K words so that
// filtering still leaves up to K. The caller guarantees t_i is not a risk
// token.
inline std::vector<MaskedPrediction> generate_candidates(const TokenSeq& sentence, Position i,
                                                         std::size_t k,
                                                         const ModelBackend& backend) {
  if (k == 0) return {};
  const std::string& target = sentence.word(i);
  auto preds = backend.fill_mask_ranked(sentence, sentence.masked(i), i, 2 * k);
  std::vector<MaskedPrediction> out;
  for (auto& p : preds) {
    if (is_morphological_derivation(p.word, target)) continue;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const MaskedPrediction& q) { return q.word == p.word; });
    if (seen) continue;
    out.push_back(std::move(p));
    if (out.size() == k) break;
  }
  return out;
}

// Entailment of S with t_i replaced by w, the original S as premise.
inline double score_relatedness(const TokenSeq& sentence, Position i, const std::string& w,
                                const ModelBackend& backend) {
  return backend.entailment_probability(sentence, sentence.with_word(i, w));
}

inline RankedCandidates lexical_substitution(const TokenSeq& sentence, Position i, std::size_t k,
                                             const ModelBackend& backend) {
  RankedCandidates out;
  out.target_index = i;
  out.initial = generate_candidates(sentence, i, k, backend);
  if (out.initial.empty()) return out;

  std::vector<TokenSeq> substituted;
  substituted.reserve(out.initial.size());
  for (const auto& p : out.initial) substituted.push_back(sentence.with_word(i, p.word));
  const std::vector<double> scores = backend.entailment_batch(sentence, substituted);

  for (std::size_t n = 0; n < out.initial.size(); ++n) {
    out.ranked.push_back({out.initial[n].word, out.initial[n].probability, scores[n]});
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(), sr_order);
  return out;
}

}  // namespace ctxmark

#endif  // CTXMARK_LEXSUB_HPP_
