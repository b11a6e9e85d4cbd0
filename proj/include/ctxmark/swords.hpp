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

// Lexical-substitution benchmark ingestion and P/R/F scoring at k.
//
// Benchmark file: one JSON object per line,
//   {"context": str, "target_offset": int, "acceptable": [str], "conceivable": [str]}
// target_offset is the byte offset of the target token in context; an
// optional "target" field is checked against the token found there.

#ifndef CTXMARK_SWORDS_HPP_
#define CTXMARK_SWORDS_HPP_

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ctxmark/errors.hpp"
#include "ctxmark/metrics.hpp"
#include "ctxmark/text.hpp"

namespace ctxmark {

struct SwordsInstance {
  std::string context;
  std::size_t target_offset = 0;
  TokenSeq tokens;
  Position target_position = 0;
  std::vector<std::string> acceptable;
  std::vector<std::string> conceivable;  // superset of acceptable

  const std::string& target() const { return tokens.word(target_position); }
};

inline std::vector<SwordsInstance> parse_swords(std::string_view content,
                                                const std::string& source = "<memory>") {
  std::vector<SwordsInstance> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto fail = [&](const std::string& msg) -> void {
      throw SchemaError(source + ":" + std::to_string(line_no) + ": " + msg);
    };

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      fail("not valid JSON");
    }
    if (!j.is_object()) fail("expected a JSON object");
    for (const char* f : {"context", "target_offset", "acceptable", "conceivable"}) {
      if (!j.contains(f)) fail(std::string("missing field '") + f + "'");
    }
    if (!j["context"].is_string()) fail("'context' must be a string");
    if (!j["target_offset"].is_number_unsigned()) fail("'target_offset' must be a non-negative integer");
    auto words = [&](const char* f) {
      std::vector<std::string> v;
      if (!j[f].is_array()) fail(std::string("'") + f + "' must be an array");
      for (const auto& w : j[f]) {
        if (!w.is_string() || w.get_ref<const std::string&>().empty()) {
          fail(std::string("'") + f + "' must hold non-empty strings");
        }
        v.push_back(w.get<std::string>());
      }
      return v;
    };

    SwordsInstance inst;
    inst.context = j["context"].get<std::string>();
    inst.target_offset = j["target_offset"].get<std::size_t>();
    inst.acceptable = words("acceptable");
    inst.conceivable = words("conceivable");

    std::vector<std::string> toks;
    for (auto& span : tokenize_with_offsets(inst.context)) {
      if (span.offset == inst.target_offset) inst.target_position = toks.size() + 1;
      toks.push_back(std::move(span.text));
    }
    if (inst.target_position == 0) fail("target_offset does not start a token");
    inst.tokens = TokenSeq(std::move(toks));
    if (j.contains("target") && j["target"] != inst.target()) {
      fail("token at target_offset is '" + inst.target() + "', not the declared target");
    }

    const std::set<std::string> conceivable(inst.conceivable.begin(), inst.conceivable.end());
    for (const auto& w : inst.acceptable) {
      if (!conceivable.count(w)) fail("acceptable word '" + w + "' is not in conceivable");
    }
    if (conceivable.count(inst.target())) fail("target word listed as a substitute");
    out.push_back(std::move(inst));
  }
  return out;
}

inline std::vector<SwordsInstance> load_swords(const std::string& path) {
  return parse_swords(read_file(path), path);
}

enum class SwordsMode { kLenient, kStrict };

inline const char* to_string(SwordsMode m) { return m == SwordsMode::kLenient ? "lenient" : "strict"; }

struct InstanceScore {
  std::size_t considered = 0;  // substitutes in the top-k
  std::size_t acceptable_hits = 0;
  std::size_t conceivable_hits = 0;
  std::optional<double> p, r, pc, rc;
};

struct SwordsScores {
  SwordsMode mode = SwordsMode::kLenient;
  std::size_t k = 10;
  std::size_t instances = 0;
  MeanAccumulator p, r, pc, rc;  // means over instances where defined
  std::vector<InstanceScore> per_instance;

  static double harmonic(double a, double b) { return a + b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }
  double precision() const { return p.mean().value_or(0.0); }
  double recall() const { return r.mean().value_or(0.0); }
  double f() const { return harmonic(precision(), recall()); }
  double precision_c() const { return pc.mean().value_or(0.0); }
  double recall_c() const { return rc.mean().value_or(0.0); }
  double f_c() const { return harmonic(precision_c(), recall_c()); }
  // Instances left out of the precision means because their top-k was empty.
  std::size_t undefined_precision() const { return instances - p.count(); }
};

// Scores one instance. System substitutes are de-duplicated and the target
// word itself is dropped; lenient mode also drops words outside the
// conceivable list before taking the top k.
inline InstanceScore score_instance(const std::vector<std::string>& system, const SwordsInstance& inst,
                                    std::size_t k, SwordsMode mode) {
  const std::set<std::string> acceptable(inst.acceptable.begin(), inst.acceptable.end());
  const std::set<std::string> conceivable(inst.conceivable.begin(), inst.conceivable.end());
  std::vector<std::string> top;
  for (const auto& w : system) {
    if (top.size() == k) break;
    if (w == inst.target()) continue;
    if (std::find(top.begin(), top.end(), w) != top.end()) continue;
    if (mode == SwordsMode::kLenient && !conceivable.count(w)) continue;
    top.push_back(w);
  }
  InstanceScore s;
  s.considered = top.size();
  for (const auto& w : top) {
    s.acceptable_hits += acceptable.count(w);
    s.conceivable_hits += conceivable.count(w);
  }
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  s.p = ratio(s.acceptable_hits, s.considered);
  s.pc = ratio(s.conceivable_hits, s.considered);
  s.r = ratio(s.acceptable_hits, std::min(k, acceptable.size()));
  s.rc = ratio(s.conceivable_hits, std::min(k, conceivable.size()));
  return s;
}

// Macro average: P and R are averaged over instances, F is the harmonic
// mean of the averages.
inline SwordsScores swords_score(const std::vector<std::vector<std::string>>& system_outputs,
                                 const std::vector<SwordsInstance>& instances, std::size_t k,
                                 SwordsMode mode) {
  if (k < 1) throw ContractViolation("swords_score: k must be >= 1");
  if (system_outputs.size() != instances.size()) {
    throw ContractViolation("swords_score: one system output per instance required");
  }
  SwordsScores out;
  out.mode = mode;
  out.k = k;
  out.instances = instances.size();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    InstanceScore s = score_instance(system_outputs[i], instances[i], k, mode);
    if (s.p) out.p.add(*s.p);
    if (s.r) out.r.add(*s.r);
    if (s.pc) out.pc.add(*s.pc);
    if (s.rc) out.rc.add(*s.rc);
    out.per_instance.push_back(std::move(s));
  }
  return out;
}

}  // namespace ctxmark

#endif  // CTXMARK_SWORDS_HPP_
