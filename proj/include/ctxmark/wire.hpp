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

// JSON bodies exchanged with the inference sidecar.
//
// Sentences travel as arrays of tokens, mask_index is 1-based, and the mask
// slot holds kMaskToken. Every request and response carries `backend_id`.
// Probabilities and cosines are decimal strings with exactly six fractional
// digits ("0.990000", "-0.250000").
//
//   GET  /info             -> {backend_id, mlm_model_id, nli_model_id, sts_model_id}
//   GET  /healthz          -> 200
//   POST /fill_mask        {reference, masked, mask_index, top_k}
//                          -> {predictions: [{word, probability}]}
//   POST /nli              {premise, hypothesis} -> {entailment}
//   POST /similarity       {a, b} -> {cosine}
//   POST /token_prob       {masked, mask_index, word} -> {probability}
//   POST /is_single_piece  {word} -> {single_piece: bool}
//   POST /batch            {requests: [{op, ...body}]} -> {responses: [...]}

#ifndef CTXMARK_WIRE_HPP_
#define CTXMARK_WIRE_HPP_

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ctxmark/backend.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark::wire {

using nlohmann::json;

inline std::string format_decimal6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

// Accepts only the six-fractional-digit form.
inline double parse_decimal6(const json& j, std::string_view field) {
  if (!j.is_string()) {
    throw ProtocolMismatch(std::string("field '") + std::string(field) + "' is not a decimal string");
  }
  const std::string& s = j.get_ref<const std::string&>();
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') ++i;
  const std::size_t int_begin = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  bool ok = i > int_begin && i < s.size() && s[i] == '.';
  if (ok) {
    const std::size_t frac_begin = ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    ok = i == s.size() && i - frac_begin == 6;
  }
  if (!ok) {
    throw ProtocolMismatch("field '" + std::string(field) + "' is not a 6-digit decimal: " + s);
  }
  return std::strtod(s.c_str(), nullptr);
}

inline json tokens_json(const TokenSeq& seq) { return json(seq.tokens()); }

inline TokenSeq tokens_from_json(const json& j, std::string_view field) {
  if (!j.is_array()) throw ProtocolMismatch("field '" + std::string(field) + "' is not an array");
  std::vector<std::string> toks;
  for (const auto& t : j) {
    if (!t.is_string() || t.get_ref<const std::string&>().empty()) {
      throw ProtocolMismatch("field '" + std::string(field) + "' holds a non-token");
    }
    toks.push_back(t.get<std::string>());
  }
  return TokenSeq(std::move(toks));
}

inline json fill_mask_request(const TokenSeq& reference, const TokenSeq& masked, Position mask_index,
                              std::size_t top_k) {
  return {{"reference", tokens_json(reference)},
          {"masked", tokens_json(masked)},
          {"mask_index", mask_index},
          {"top_k", top_k}};
}

inline json nli_request(const TokenSeq& premise, const TokenSeq& hypothesis) {
  return {{"premise", tokens_json(premise)}, {"hypothesis", tokens_json(hypothesis)}};
}

inline json similarity_request(const TokenSeq& a, const TokenSeq& b) {
  return {{"a", tokens_json(a)}, {"b", tokens_json(b)}};
}

inline json token_prob_request(const TokenSeq& masked, Position mask_index, const std::string& word) {
  return {{"masked", tokens_json(masked)}, {"mask_index", mask_index}, {"word", word}};
}

inline json single_piece_request(const std::string& word) { return {{"word", word}}; }

inline const json& require(const json& body, const char* field) {
  if (!body.is_object() || !body.contains(field)) {
    throw ProtocolMismatch(std::string("response lacks field '") + field + "'");
  }
  return body.at(field);
}

inline std::vector<MaskedPrediction> parse_predictions(const json& body) {
  const json& arr = require(body, "predictions");
  if (!arr.is_array()) throw ProtocolMismatch("'predictions' is not an array");
  std::vector<MaskedPrediction> out;
  for (const auto& p : arr) {
    const json& w = require(p, "word");
    if (!w.is_string()) throw ProtocolMismatch("prediction word is not a string");
    out.push_back({w.get<std::string>(), parse_decimal6(require(p, "probability"), "probability")});
  }
  return out;
}

inline json predictions_json(const std::vector<MaskedPrediction>& preds) {
  json arr = json::array();
  for (const auto& p : preds) {
    arr.push_back({{"word", p.word}, {"probability", format_decimal6(p.probability)}});
  }
  return {{"predictions", arr}};
}

inline double parse_entailment(const json& body) {
  return parse_decimal6(require(body, "entailment"), "entailment");
}
inline double parse_cosine(const json& body) { return parse_decimal6(require(body, "cosine"), "cosine"); }
inline double parse_probability(const json& body) {
  return parse_decimal6(require(body, "probability"), "probability");
}
inline bool parse_single_piece(const json& body) {
  const json& v = require(body, "single_piece");
  if (!v.is_boolean()) throw ProtocolMismatch("'single_piece' is not a boolean");
  return v.get<bool>();
}

}  // namespace ctxmark::wire

#endif  // CTXMARK_WIRE_HPP_
