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

#ifndef CTXMARK_RISK_HPP_
#define CTXMARK_RISK_HPP_

#include <string>

#include "ctxmark/backend.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

// Tokens never used as carriers: punctuation, stopwords, and words the
// backend splits into several vocabulary pieces.
inline bool is_risk_token(const std::string& token, const RiskConfig& cfg,
                          const ModelBackend& backend) {
  if (token.empty()) throw ContractViolation("is_risk_token: empty token");
  if (is_punctuation(token)) return true;
  if (cfg.is_stopword(token)) return true;
  return !backend.is_single_piece(token);
}

}  // namespace ctxmark

#endif  // CTXMARK_RISK_HPP_
