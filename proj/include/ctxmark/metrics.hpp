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

// Watermark quality metrics: SR, SS, payload, BER, recovery proportion.

#ifndef CTXMARK_METRICS_HPP_
#define CTXMARK_METRICS_HPP_

#include <cmath>
#include <cstddef>
#include <optional>

#include "ctxmark/backend.hpp"
#include "ctxmark/codec.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/framing.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

// Neumaier-compensated running mean; the result does not depend on the
// grouping of the inputs beyond rounding of the final division.
class MeanAccumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    ++n_;
  }
  std::size_t count() const { return n_; }
  double sum() const { return sum_ + comp_; }
  std::optional<double> mean() const {
    if (n_ == 0) return std::nullopt;
    return sum() / static_cast<double>(n_);
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  std::size_t n_ = 0;
};

inline double sr_metric(const TokenSeq& original, const TokenSeq& watermarked,
                        const ModelBackend& backend) {
  if (original.size() != watermarked.size()) {
    throw ContractViolation("sr_metric: sentences differ in token count");
  }
  return backend.entailment_probability(original, watermarked);
}

inline double ss_metric(const TokenSeq& original, const TokenSeq& watermarked,
                        const ModelBackend& backend) {
  return backend.sentence_similarity(original, watermarked);
}

inline double payload_bpw(const EmbeddingReport& report, std::size_t total_words) {
  if (total_words == 0) throw ContractViolation("payload_bpw: no words");
  return static_cast<double>(report.bits_embedded) / static_cast<double>(total_words);
}

inline double ber(const BitStream& sent, const BitStream& received) {
  if (sent.size() != received.size()) {
    throw ContractViolation("ber: bit streams differ in length (" + std::to_string(sent.size()) +
                            " vs " + std::to_string(received.size()) + ")");
  }
  if (sent.empty()) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) diff += sent[i] != received[i] ? 1 : 0;
  return static_cast<double>(diff) / static_cast<double>(sent.size());
}

struct RecoveryStats {
  std::size_t changed = 0;    // carriers whose word was actually replaced
  std::size_t recovered = 0;  // of those, restored to the original word
  // recovered / changed; absent when nothing was changed.
  std::optional<double> proportion() const {
    if (changed == 0) return std::nullopt;
    return static_cast<double>(recovered) / static_cast<double>(changed);
  }
};

inline RecoveryStats recovery_proportion(const Document& recovered, const Document& original,
                                         const EmbeddingReport& report) {
  if (recovered.sentences.size() != original.sentences.size()) {
    throw ContractViolation("recovery_proportion: documents are not aligned");
  }
  RecoveryStats out;
  for (const auto& r : report.records) {
    if (r.chosen == r.original) continue;
    ++out.changed;
    const TokenSeq& rec = recovered.sentences.at(r.sentence_idx);
    const TokenSeq& orig = original.sentences.at(r.sentence_idx);
    if (rec.word(r.position) == orig.word(r.position)) ++out.recovered;
  }
  return out;
}

struct SemanticScores {
  MeanAccumulator sr;
  MeanAccumulator ss;
  MeanAccumulator sr_changed;  // only sentences that differ
  MeanAccumulator ss_changed;
};

inline SemanticScores semantic_scores(const Document& original, const Document& watermarked,
                                      const ModelBackend& backend) {
  if (original.sentences.size() != watermarked.sentences.size()) {
    throw ContractViolation("semantic_scores: documents are not aligned");
  }
  SemanticScores out;
  for (std::size_t s = 0; s < original.sentences.size(); ++s) {
    const auto& a = original.sentences[s];
    const auto& b = watermarked.sentences[s];
    const double sr = sr_metric(a, b, backend);
    const double ss = ss_metric(a, b, backend);
    out.sr.add(sr);
    out.ss.add(ss);
    if (!(a == b)) {
      out.sr_changed.add(sr);
      out.ss_changed.add(ss);
    }
  }
  return out;
}

}  // namespace ctxmark

#endif  // CTXMARK_METRICS_HPP_
