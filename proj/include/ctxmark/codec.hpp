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

// Sequence incremental watermarking.
//
// Each sentence is scanned left to right from t_2 while index < N - f. A
// non-risk word t_i is a carrier when, on its local context {t_1..t_{i+1}},
// it passes the synchronicity test with t_i in its sorted pair C, both words
// of C are safe to write back, and (unless t_{i-1} is the protected next
// word of the previous carrier) the substitutability test passes. A carrier
// takes c1 for bit 0 and c2 for bit 1, and the scan resumes at i + f + 1.
// Extraction runs the same scan over the watermarked sentence and reads the
// bit back from the word found at each carrier.

#ifndef CTXMARK_CODEC_HPP_
#define CTXMARK_CODEC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxmark/backend.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/framing.hpp"
#include "ctxmark/parallel.hpp"
#include "ctxmark/risk.hpp"
#include "ctxmark/sync.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

struct CodecOptions {
  std::size_t f = 1;  // minimum spacing: consecutive carriers are >= f+1 apart
  SyncOptions sync;
  bool substitutability_test = true;  // false only for ablation runs
};

class BitSource {
 public:
  virtual ~BitSource() = default;
  // Next bit, or nullopt when exhausted.
  virtual std::optional<int> next() = 0;
};

class VectorBitSource final : public BitSource {
 public:
  explicit VectorBitSource(BitStream bits) : bits_(std::move(bits)) {}
  std::optional<int> next() override {
    if (pos_ >= bits_.size()) return std::nullopt;
    return bits_[pos_++];
  }
  std::size_t consumed() const { return pos_; }

 private:
  BitStream bits_;
  std::size_t pos_ = 0;
};

// Endless zeros; used to probe capacity.
class ZeroBitSource final : public BitSource {
 public:
  std::optional<int> next() override { return 0; }
};

struct CarrierRecord {
  std::size_t sentence_idx = 0;  // 0-based
  Position position = 0;         // 1-based
  std::string original;          // word before embedding (extraction: word found)
  std::string chosen;            // word after embedding
  std::optional<CandidatePair> candidates;
  int bit = 0;

  friend bool operator==(const CarrierRecord&, const CarrierRecord&) = default;
};

struct EmbeddingReport {
  std::vector<CarrierRecord> records;
  std::size_t words_scanned = 0;  // tokens in the cover text
  std::size_t bits_embedded = 0;
};

namespace codec_detail {

// Writing w at i must not change tokenization or sentence boundaries of the
// local context, and w must itself be a non-risk word so the extractor
// reaches the same decision at i.
inline bool safe_to_write(const TokenSeq& local_context, Position i, const std::string& w,
                          const RiskConfig& risk, const ModelBackend& backend) {
  if (is_risk_token(w, risk, backend)) return false;
  if (w == local_context.word(i)) return true;
  const TokenSeq changed = local_context.with_word(i, w);
  const auto resplit = split_sentences(detokenize(changed));
  return resplit.size() == 1 && resplit.front() == changed;
}

}  // namespace codec_detail

// Runs the carrier scan over `working`, calling
//   decide(position, const CandidatePair&, const std::string& current)
//       -> std::optional<std::string>
// at each carrier. The returned word replaces t_i; nullopt stops the scan.
// Returns the carriers visited, in order.
template <typename Decide>
std::vector<CarrierRecord> scan_sentence(TokenSeq& working, const CodecOptions& opts,
                                         const ModelBackend& backend, const RiskConfig& risk,
                                         Decide&& decide) {
  if (opts.f < 1) throw ContractViolation("codec: f must be >= 1");
  std::vector<CarrierRecord> out;
  const std::size_t n = working.size();
  Position latest = 0;
  Position index = 2;
  while (index + opts.f < n) {
    const std::string& word = working.word(index);
    if (is_risk_token(word, risk, backend)) {
      ++index;
      continue;
    }
    const TokenSeq local = working.prefix(index + 1);
    const SyncResult st = synchronicity_test(index, local, backend, opts.sync);
    bool substitutable = st.sync && st.candidates && st.candidates->contains(word);
    if (substitutable) {
      const CandidatePair& c = *st.candidates;
      substitutable = codec_detail::safe_to_write(local, index, c.c1(), risk, backend) &&
                      codec_detail::safe_to_write(local, index, c.c2(), risk, backend);
    }
    if (substitutable && opts.substitutability_test && index - latest != opts.f + 1) {
      substitutable = substitutability_test(index, local, *st.candidates, backend, risk, opts.sync);
    }
    if (!substitutable) {
      ++index;
      continue;
    }
    const CandidatePair& c = *st.candidates;
    std::optional<std::string> chosen = decide(index, c, word);
    if (!chosen) break;
    const auto bit = c.bit_of(*chosen);
    if (!bit) throw ContractViolation("codec: chosen word is not in the candidate pair");
    out.push_back({0, index, word, *chosen, c, *bit});
    working = working.with_word(index, *chosen);
    latest = index;
    index += opts.f + 1;
  }
  return out;
}

struct SentenceEmbedding {
  TokenSeq watermarked;
  std::vector<CarrierRecord> records;
};

inline SentenceEmbedding embed_sentence(const TokenSeq& sentence, BitSource& bits,
                                        const CodecOptions& opts, const ModelBackend& backend,
                                        const RiskConfig& risk) {
  SentenceEmbedding out{sentence, {}};
  out.records = scan_sentence(out.watermarked, opts, backend, risk,
                              [&](Position, const CandidatePair& c,
                                  const std::string&) -> std::optional<std::string> {
                                const auto bit = bits.next();
                                if (!bit) return std::nullopt;
                                return c.word_for(*bit);
                              });
  return out;
}

struct SentenceExtraction {
  BitStream bits;
  std::vector<CarrierRecord> carriers;
};

inline SentenceExtraction extract_sentence(const TokenSeq& watermarked, const CodecOptions& opts,
                                           const ModelBackend& backend, const RiskConfig& risk) {
  SentenceExtraction out;
  TokenSeq working = watermarked;
  out.carriers = scan_sentence(working, opts, backend, risk,
                               [&](Position i, const CandidatePair& c,
                                   const std::string& current) -> std::optional<std::string> {
                                 if (!c.contains(current)) {
                                   throw CorruptionError("carrier at position " + std::to_string(i) +
                                                         " holds '" + current +
                                                         "', outside its candidate pair");
                                 }
                                 return current;
                               });
  for (const auto& r : out.carriers) out.bits.push_back(static_cast<std::uint8_t>(r.bit));
  return out;
}

struct DocumentEmbedding {
  Document watermarked;
  EmbeddingReport report;
};

// Bits are consumed across sentences in document order.
inline DocumentEmbedding embed_document(const Document& doc, BitSource& bits,
                                        const CodecOptions& opts, const ModelBackend& backend,
                                        const RiskConfig& risk) {
  DocumentEmbedding out;
  out.report.words_scanned = count_tokens(doc);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    SentenceEmbedding e = embed_sentence(doc.sentences[s], bits, opts, backend, risk);
    for (auto& r : e.records) {
      r.sentence_idx = s;
      out.report.records.push_back(std::move(r));
    }
    out.watermarked.sentences.push_back(std::move(e.watermarked));
  }
  out.report.bits_embedded = out.report.records.size();
  out.watermarked.source_text = render_document(out.watermarked);
  return out;
}

struct DocumentExtraction {
  BitStream bits;
  std::vector<CarrierRecord> carriers;
};

inline DocumentExtraction extract_document(const Document& doc, const CodecOptions& opts,
                                           const ModelBackend& backend, const RiskConfig& risk,
                                           std::size_t jobs = 1) {
  std::vector<SentenceExtraction> parts(doc.sentences.size());
  parallel_for(doc.sentences.size(), jobs, [&](std::size_t s) {
    parts[s] = extract_sentence(doc.sentences[s], opts, backend, risk);
    for (auto& c : parts[s].carriers) c.sentence_idx = s;
  });
  DocumentExtraction out;
  for (auto& p : parts) {
    out.bits.insert(out.bits.end(), p.bits.begin(), p.bits.end());
    for (auto& c : p.carriers) out.carriers.push_back(std::move(c));
  }
  return out;
}

// Bits the document can carry, measured by embedding endless zeros.
inline std::size_t probe_capacity(const Document& doc, const CodecOptions& opts,
                                  const ModelBackend& backend, const RiskConfig& risk,
                                  std::size_t jobs = 1) {
  std::vector<std::size_t> counts(doc.sentences.size());
  parallel_for(doc.sentences.size(), jobs, [&](std::size_t s) {
    ZeroBitSource zeros;
    counts[s] = embed_sentence(doc.sentences[s], zeros, opts, backend, risk).records.size();
  });
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

struct RecoveredWord {
  std::size_t sentence_idx = 0;
  Position position = 0;
  std::string watermarked;
  std::string recovered;
  std::string c1;
  std::string c2;
  double p1 = 0.0;  // probability of c1 at the masked slot
  double p2 = 0.0;
};

struct DocumentRecovery {
  Document recovered;
  std::vector<RecoveredWord> words;
};

// Undoes substitutions blindly: at each carrier the slot is masked in the
// watermarked sentence and the candidate with the higher token probability
// is kept (c1 on ties).
inline DocumentRecovery recover_document(const Document& watermarked, const CodecOptions& opts,
                                         const ModelBackend& backend, const RiskConfig& risk,
                                         std::size_t jobs = 1) {
  const std::size_t n = watermarked.sentences.size();
  std::vector<TokenSeq> sentences(n);
  std::vector<std::vector<RecoveredWord>> words(n);
  parallel_for(n, jobs, [&](std::size_t s) {
    const TokenSeq& sw = watermarked.sentences[s];
    TokenSeq rec = sw;
    for (const auto& carrier : extract_sentence(sw, opts, backend, risk).carriers) {
      const CandidatePair& c = *carrier.candidates;
      const TokenSeq masked = sw.masked(carrier.position);
      const double p1 = backend.token_probability(masked, carrier.position, c.c1());
      const double p2 = backend.token_probability(masked, carrier.position, c.c2());
      const std::string& pick = p1 >= p2 ? c.c1() : c.c2();
      rec = rec.with_word(carrier.position, pick);
      words[s].push_back({s, carrier.position, carrier.chosen, pick, c.c1(), c.c2(), p1, p2});
    }
    sentences[s] = std::move(rec);
  });
  DocumentRecovery out;
  out.recovered.sentences = std::move(sentences);
  out.recovered.source_text = render_document(out.recovered);
  for (auto& w : words) {
    for (auto& r : w) out.words.push_back(std::move(r));
  }
  return out;
}

}  // namespace ctxmark

#endif  // CTXMARK_CODEC_HPP_
