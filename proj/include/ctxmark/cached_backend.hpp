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

#ifndef CTXMARK_CACHED_BACKEND_HPP_
#define CTXMARK_CACHED_BACKEND_HPP_

#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "ctxmark/backend.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/wire.hpp"

namespace ctxmark {

// Memoizes another backend, keyed by (backend_id, operation, canonical
// request JSON). With a path, entries persist as JSON lines
// `{"k": key, "v": value}` and are reloaded on construction; lines written
// for another backend id are never hit because the id is part of the key.
//
// Values are stored as JSON numbers, which round-trip doubles exactly, so a
// cached answer is bit-identical to the live one.
class CachedBackend final : public ModelBackend {
 public:
  explicit CachedBackend(const ModelBackend& inner, std::string path = {})
      : inner_(inner), id_(inner.backend_id()), path_(std::move(path)) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        auto j = nlohmann::json::parse(line);
        entries_[j.at("k").get<std::string>()] = j.at("v");
      } catch (const nlohmann::json::exception&) {
        throw SchemaError(path_ + ":" + std::to_string(line_no) + ": malformed cache entry");
      }
    }
    out_.open(path_, std::ios::app);
    if (!out_) throw SchemaError("cannot open cache file " + path_);
  }

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

  std::string backend_id() const override { return id_; }

  std::vector<MaskedPrediction> fill_mask_ranked(const TokenSeq& reference, const TokenSeq& masked,
                                                 Position mask_index,
                                                 std::size_t top_k) const override {
    const auto key = make_key("fill_mask", wire::fill_mask_request(reference, masked, mask_index, top_k));
    nlohmann::json v = lookup_or(key, [&] {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& p : inner_.fill_mask_ranked(reference, masked, mask_index, top_k)) {
        arr.push_back({p.word, p.probability});
      }
      return arr;
    });
    std::vector<MaskedPrediction> out;
    for (const auto& p : v) out.push_back({p.at(0).get<std::string>(), p.at(1).get<double>()});
    return out;
  }

  double entailment_probability(const TokenSeq& premise, const TokenSeq& hypothesis) const override {
    const auto key = make_key("nli", wire::nli_request(premise, hypothesis));
    return lookup_or(key, [&] {
             return nlohmann::json(inner_.entailment_probability(premise, hypothesis));
           }).get<double>();
  }

  std::vector<double> entailment_batch(const TokenSeq& premise,
                                       const std::vector<TokenSeq>& hypotheses) const override {
    std::vector<double> out(hypotheses.size());
    std::vector<std::size_t> missing;
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
      keys.push_back(make_key("nli", wire::nli_request(premise, hypotheses[i])));
      if (auto v = find(keys.back())) {
        out[i] = v->get<double>();
      } else {
        missing.push_back(i);
      }
    }
    if (missing.empty()) return out;
    std::vector<TokenSeq> batch;
    for (std::size_t i : missing) batch.push_back(hypotheses[i]);
    const std::vector<double> fresh = inner_.entailment_batch(premise, batch);
    for (std::size_t n = 0; n < missing.size(); ++n) {
      out[missing[n]] = fresh[n];
      store(keys[missing[n]], fresh[n]);
    }
    return out;
  }

  double sentence_similarity(const TokenSeq& a, const TokenSeq& b) const override {
    const auto key = make_key("similarity", wire::similarity_request(a, b));
    return lookup_or(key, [&] { return nlohmann::json(inner_.sentence_similarity(a, b)); })
        .get<double>();
  }

  double token_probability(const TokenSeq& masked, Position mask_index,
                           const std::string& word) const override {
    const auto key = make_key("token_prob", wire::token_prob_request(masked, mask_index, word));
    return lookup_or(key, [&] {
             return nlohmann::json(inner_.token_probability(masked, mask_index, word));
           }).get<double>();
  }

  bool is_single_piece(const std::string& word) const override {
    const auto key = make_key("is_single_piece", wire::single_piece_request(word));
    return lookup_or(key, [&] { return nlohmann::json(inner_.is_single_piece(word)); }).get<bool>();
  }

 private:
  std::string make_key(const char* op, const nlohmann::json& request) const {
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    return id_ + '\x1f' + op + '\x1f' + request.dump();
  }

  std::optional<nlohmann::json> find(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    ++hits_;
    return it->second;
  }

  void store(const std::string& key, nlohmann::json value) const {
    std::lock_guard<std::mutex> lock(mu_);
    ++misses_;
    if (out_.is_open()) {
      out_ << nlohmann::json{{"k", key}, {"v", value}}.dump() << '\n';
      out_.flush();
    }
    entries_.emplace(key, std::move(value));
  }

  template <typename Compute>
  nlohmann::json lookup_or(const std::string& key, Compute&& compute) const {
    if (auto v = find(key)) return *v;
    nlohmann::json value = compute();
    store(key, value);
    return value;
  }

  const ModelBackend& inner_;
  std::string id_;
  std::string path_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, nlohmann::json> entries_;
  mutable std::ofstream out_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
};

}  // namespace ctxmark

#endif  // CTXMARK_CACHED_BACKEND_HPP_
