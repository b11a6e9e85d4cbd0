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

// HTTP client for the inference sidecar (wire format in wire.hpp).

#ifndef CTXMARK_REMOTE_BACKEND_HPP_
#define CTXMARK_REMOTE_BACKEND_HPP_

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "ctxmark/backend.hpp"
#include "ctxmark/errors.hpp"
#include "ctxmark/wire.hpp"

namespace ctxmark {

struct RemoteOptions {
  int max_attempts = 3;
  int connect_timeout_s = 5;
  int read_timeout_s = 120;
};

struct SidecarInfo {
  std::string backend_id;
  std::string mlm_model_id;
  std::string nli_model_id;
  std::string sts_model_id;
};

class RemoteBackend final : public ModelBackend {
 public:
  // Fetches /info and pins the backend id. A non-empty `expected_backend_id`
  // that differs from the sidecar's is refused with ProtocolMismatch.
  RemoteBackend(std::string url, const std::string& expected_backend_id, RemoteOptions opts = {})
      : url_(std::move(url)), opts_(opts), client_(std::make_unique<httplib::Client>(url_)) {
    client_->set_connection_timeout(opts_.connect_timeout_s, 0);
    client_->set_read_timeout(opts_.read_timeout_s, 0);
    const nlohmann::json body = call_get("/info");
    auto str = [&](const char* f) {
      return body.contains(f) && body.at(f).is_string() ? body.at(f).get<std::string>() : std::string();
    };
    info_ = {str("backend_id"), str("mlm_model_id"), str("nli_model_id"), str("sts_model_id")};
    if (info_.backend_id.empty()) throw ProtocolMismatch("sidecar /info has no backend_id");
    if (!expected_backend_id.empty() && expected_backend_id != info_.backend_id) {
      throw ProtocolMismatch("backend id mismatch: expected " + expected_backend_id + ", sidecar has " +
                             info_.backend_id);
    }
  }

  const SidecarInfo& info() const { return info_; }
  std::string backend_id() const override { return info_.backend_id; }

  std::vector<MaskedPrediction> fill_mask_ranked(const TokenSeq& reference, const TokenSeq& masked,
                                                 Position mask_index,
                                                 std::size_t top_k) const override {
    check_mask_query(reference, masked, mask_index, top_k);
    auto preds = wire::parse_predictions(
        call_post("/fill_mask", wire::fill_mask_request(reference, masked, mask_index, top_k)));
    // Re-sort locally so ties follow code-point order whatever the server did.
    sort_predictions(preds);
    if (preds.size() > top_k) preds.resize(top_k);
    return preds;
  }

  double entailment_probability(const TokenSeq& premise, const TokenSeq& hypothesis) const override {
    return wire::parse_entailment(call_post("/nli", wire::nli_request(premise, hypothesis)));
  }

  std::vector<double> entailment_batch(const TokenSeq& premise,
                                       const std::vector<TokenSeq>& hypotheses) const override {
    if (hypotheses.empty()) return {};
    nlohmann::json requests = nlohmann::json::array();
    for (const auto& h : hypotheses) {
      auto r = wire::nli_request(premise, h);
      r["op"] = "nli";
      requests.push_back(std::move(r));
    }
    const nlohmann::json body = call_post("/batch", {{"requests", requests}});
    const auto& responses = wire::require(body, "responses");
    if (!responses.is_array() || responses.size() != hypotheses.size()) {
      throw ProtocolMismatch("/batch returned the wrong number of responses");
    }
    std::vector<double> out;
    for (const auto& r : responses) out.push_back(wire::parse_entailment(r));
    return out;
  }

  double sentence_similarity(const TokenSeq& a, const TokenSeq& b) const override {
    return wire::parse_cosine(call_post("/similarity", wire::similarity_request(a, b)));
  }

  double token_probability(const TokenSeq& masked, Position mask_index,
                           const std::string& word) const override {
    check_mask_slot(masked, mask_index);
    return wire::parse_probability(
        call_post("/token_prob", wire::token_prob_request(masked, mask_index, word)));
  }

  bool is_single_piece(const std::string& word) const override {
    return wire::parse_single_piece(call_post("/is_single_piece", wire::single_piece_request(word)));
  }

 private:
  nlohmann::json call_get(const std::string& path) const {
    return call(path, [&] { return client_->Get(path); });
  }

  nlohmann::json call_post(const std::string& path, nlohmann::json body) const {
    body["backend_id"] = info_.backend_id;
    const std::string payload = body.dump();
    nlohmann::json out =
        call(path, [&] { return client_->Post(path, payload, "application/json"); });
    if (!out.is_object() || !out.contains("backend_id") || out.at("backend_id") != info_.backend_id) {
      throw ProtocolMismatch(path + ": response backend_id does not match " + info_.backend_id);
    }
    return out;
  }

  template <typename Send>
  nlohmann::json call(const std::string& path, Send&& send) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::string last_error;
    for (int attempt = 0; attempt < opts_.max_attempts; ++attempt) {
      httplib::Result res = send();
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw ProtocolMismatch(path + ": sidecar rejected request with HTTP " +
                               std::to_string(res->status) + ": " + res->body);
      }
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolMismatch(path + ": malformed JSON body: " + e.what());
      }
    }
    throw BackendError(url_ + path + ": " + last_error);
  }

  std::string url_;
  RemoteOptions opts_;
  std::unique_ptr<httplib::Client> client_;
  SidecarInfo info_;
  mutable std::mutex mu_;
};

}  // namespace ctxmark

#endif  // CTXMARK_REMOTE_BACKEND_HPP_
