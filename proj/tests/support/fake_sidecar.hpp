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

// In-process HTTP sidecar answering the wire protocol from a StubBackend.

#ifndef CTXMARK_TESTS_SUPPORT_FAKE_SIDECAR_HPP_
#define CTXMARK_TESTS_SUPPORT_FAKE_SIDECAR_HPP_

#include <atomic>
#include <functional>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "ctxmark/stub_backend.hpp"
#include "ctxmark/wire.hpp"

namespace ctxmark::testing {

class FakeSidecar {
 public:
  explicit FakeSidecar(const StubBackend& backend, std::string advertised_id = {})
      : backend_(backend), id_(advertised_id.empty() ? backend.backend_id() : advertised_id) {
    using nlohmann::json;
    server_.Get("/info", [this](const httplib::Request&, httplib::Response& res) {
      ++requests_;
      json body = {{"backend_id", id_},
                   {"mlm_model_id", "stub-mlm"},
                   {"nli_model_id", "stub-nli"},
                   {"sts_model_id", "stub-sts"}};
      res.set_content(body.dump(), "application/json");
    });
    server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    for (const char* op : {"fill_mask", "nli", "similarity", "token_prob", "is_single_piece"}) {
      const std::string name = op;
      server_.Post("/" + name, [this, name](const httplib::Request& req, httplib::Response& res) {
        handle(req, res, [&](const json& body) { return answer(name, body); });
      });
    }
    server_.Post("/batch", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&](const json& body) {
        json responses = json::array();
        for (const auto& r : wire::require(body, "requests")) {
          json one = answer(r.at("op").get<std::string>(), r);
          one["backend_id"] = id_;
          responses.push_back(std::move(one));
        }
        return json{{"responses", responses}};
      });
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeSidecar() {
    server_.stop();
    thread_.join();
  }

  FakeSidecar(const FakeSidecar&) = delete;
  FakeSidecar& operator=(const FakeSidecar&) = delete;

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::size_t requests() const { return requests_.load(); }

  // The next `n` POSTs fail with HTTP 503.
  void fail_next(int n) { failures_ = n; }
  // Responses carry this backend id instead of the advertised one.
  void answer_with_id(std::string id) { response_id_ = std::move(id); }
  // Responses use raw floats instead of six-decimal strings.
  void send_raw_floats(bool v) { raw_floats_ = v; }

 private:
  using json = nlohmann::json;

  template <typename Body>
  void handle(const httplib::Request& req, httplib::Response& res, Body&& body_fn) {
    ++requests_;
    if (failures_ > 0) {
      --failures_;
      res.status = 503;
      return;
    }
    json body;
    try {
      body = json::parse(req.body);
      if (body.value("backend_id", std::string()) != id_) {
        res.status = 409;
        res.set_content("backend_id mismatch", "text/plain");
        return;
      }
      json out = body_fn(body);
      out["backend_id"] = response_id_.empty() ? id_ : response_id_;
      res.set_content(out.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  }

  json number(double v) const { return raw_floats_ ? json(v) : json(wire::format_decimal6(v)); }

  json answer(const std::string& op, const json& body) const {
    auto tokens = [&](const char* f) { return wire::tokens_from_json(wire::require(body, f), f); };
    if (op == "fill_mask") {
      const auto preds = backend_.fill_mask_ranked(tokens("reference"), tokens("masked"),
                                                   body.at("mask_index").get<Position>(),
                                                   body.at("top_k").get<std::size_t>());
      json arr = json::array();
      // Reverse order: the client must not rely on server-side sorting.
      for (auto it = preds.rbegin(); it != preds.rend(); ++it) {
        arr.push_back({{"word", it->word}, {"probability", number(it->probability)}});
      }
      return {{"predictions", arr}};
    }
    if (op == "nli") {
      return {{"entailment", number(backend_.entailment_probability(tokens("premise"),
                                                                    tokens("hypothesis")))}};
    }
    if (op == "similarity") {
      return {{"cosine", number(backend_.sentence_similarity(tokens("a"), tokens("b")))}};
    }
    if (op == "token_prob") {
      return {{"probability",
               number(backend_.token_probability(tokens("masked"), body.at("mask_index").get<Position>(),
                                                 body.at("word").get<std::string>()))}};
    }
    if (op == "is_single_piece") {
      return {{"single_piece", backend_.is_single_piece(body.at("word").get<std::string>())}};
    }
    throw std::runtime_error("unknown op " + op);
  }

  const StubBackend& backend_;
  std::string id_;
  std::string response_id_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<int> failures_{0};
  std::atomic<bool> raw_floats_{false};
};

}  // namespace ctxmark::testing

#endif  // CTXMARK_TESTS_SUPPORT_FAKE_SIDECAR_HPP_
