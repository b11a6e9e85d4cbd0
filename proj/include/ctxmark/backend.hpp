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

#ifndef CTXMARK_BACKEND_HPP_
#define CTXMARK_BACKEND_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "ctxmark/errors.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

struct MaskedPrediction {
  std::string word;
  double probability = 0.0;

  friend bool operator==(const MaskedPrediction&, const MaskedPrediction&) = default;
};

// Probability descending, ties by code-point order of the word. Comparing
// UTF-8 bytes as unsigned chars gives code-point order.
inline bool prediction_order(const MaskedPrediction& a, const MaskedPrediction& b) {
  if (a.probability != b.probability) return a.probability > b.probability;
  return a.word < b.word;
}

inline void sort_predictions(std::vector<MaskedPrediction>& preds) {
  std::stable_sort(preds.begin(), preds.end(), prediction_order);
}

// Every model-dependent capability the watermarking scheme needs.
//
// Implementations must be deterministic for a fixed backend_id(): the embed
// and extract sides only agree because identical queries give identical
// answers. They must also be safe to call from several threads.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;

  virtual std::string backend_id() const = 0;

  // Masked-word prediction for `masked` (which holds kMaskToken at
  // mask_index) conditioned on the unmasked `reference`. At most top_k
  // single-piece words, sorted by prediction_order.
  virtual std::vector<MaskedPrediction> fill_mask_ranked(const TokenSeq& reference,
                                                         const TokenSeq& masked,
                                                         Position mask_index,
                                                         std::size_t top_k) const = 0;

  // Probability that `hypothesis` is entailed by `premise`. Directional.
  virtual double entailment_probability(const TokenSeq& premise,
                                        const TokenSeq& hypothesis) const = 0;

  // Symmetric similarity in [-1, 1], 1 for identical inputs.
  virtual double sentence_similarity(const TokenSeq& a, const TokenSeq& b) const = 0;

  // Probability of `word` at the masked slot; 0 for out-of-vocabulary words.
  virtual double token_probability(const TokenSeq& masked, Position mask_index,
                                   const std::string& word) const = 0;

  virtual bool is_single_piece(const std::string& word) const = 0;

  // Entailment of several hypotheses against one premise. Backends with a
  // batch transport override this; results are in hypothesis order.
  virtual std::vector<double> entailment_batch(const TokenSeq& premise,
                                               const std::vector<TokenSeq>& hypotheses) const {
    std::vector<double> out;
    out.reserve(hypotheses.size());
    for (const auto& h : hypotheses) out.push_back(entailment_probability(premise, h));
    return out;
  }
};

// Shared precondition check for fill_mask_ranked.
inline void check_mask_query(const TokenSeq& reference, const TokenSeq& masked,
                             Position mask_index, std::size_t top_k) {
  if (top_k < 1) throw ContractViolation("fill_mask_ranked: top_k must be >= 1");
  if (mask_index < 1 || mask_index > masked.size()) {
    throw ContractViolation("fill_mask_ranked: mask_index out of range");
  }
  if (reference.size() != masked.size()) {
    throw ContractViolation("fill_mask_ranked: reference and masked differ in length");
  }
  for (Position p = 1; p <= masked.size(); ++p) {
    if (p == mask_index) {
      if (masked.word(p) != kMaskToken) {
        throw ContractViolation("fill_mask_ranked: no mask placeholder at mask_index");
      }
    } else if (masked.word(p) != reference.word(p)) {
      throw ContractViolation("fill_mask_ranked: masked differs from reference off the mask");
    }
  }
}

inline void check_mask_slot(const TokenSeq& masked, Position mask_index) {
  if (mask_index < 1 || mask_index > masked.size() || masked.word(mask_index) != kMaskToken) {
    throw ContractViolation("token_probability: no mask placeholder at mask_index");
  }
}

}  // namespace ctxmark

#endif  // CTXMARK_BACKEND_HPP_
