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

#include "ctxmark/remote_backend.hpp"

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "ctxmark/cached_backend.hpp"
#include "ctxmark/codec.hpp"
#include "ctxmark/stub_backend.hpp"
#include "ctxmark/wire.hpp"
#include "support/fake_sidecar.hpp"

namespace ctxmark {
namespace {

using nlohmann::json;
using testing::FakeSidecar;

constexpr const char* kTable =
    "time\tnight\t0.99\n"
    "time\tevening\t0.98\n"
    "time\tdusk\t0.90\n"
    "met\tmet\t0.5\n"
    "left\tleft\t0.5\n";

const TokenSeq kSentence{"We", "met", "at", "night", "again", "."};

RemoteOptions fast_options() {
  RemoteOptions o;
  o.connect_timeout_s = 2;
  o.read_timeout_s = 5;
  return o;
}

TEST(WireTest, DecimalStringsHaveSixFractionDigits) {
  EXPECT_EQ(wire::format_decimal6(0.99), "0.990000");
  EXPECT_EQ(wire::format_decimal6(1.0), "1.000000");
  EXPECT_EQ(wire::format_decimal6(-0.25), "-0.250000");
  EXPECT_EQ(wire::format_decimal6(-0.0000001), "0.000000");
  EXPECT_EQ(wire::format_decimal6(0.1234567), "0.123457");
  EXPECT_DOUBLE_EQ(wire::parse_decimal6(json("0.990000"), "x"), 0.99);
  EXPECT_DOUBLE_EQ(wire::parse_decimal6(json("-1.000000"), "x"), -1.0);
  for (const char* bad : {"0.99", "0.9900000", ".990000", "1e-3", "0,990000", "0.99000a", ""}) {
    EXPECT_THROW(wire::parse_decimal6(json(bad), "x"), ProtocolMismatch) << bad;
  }
  EXPECT_THROW(wire::parse_decimal6(json(0.99), "x"), ProtocolMismatch);
}

TEST(WireTest, RequestsUseTokenArraysAndOneBasedIndex) {
  const json r = wire::fill_mask_request(kSentence, kSentence.masked(4), 4, 8);
  EXPECT_EQ(r.at("mask_index"), 4);
  EXPECT_EQ(r.at("masked").at(3), "[MASK]");
  EXPECT_EQ(r.at("top_k"), 8);
  EXPECT_EQ(wire::tokens_from_json(r.at("reference"), "reference"), kSentence);
  EXPECT_THROW(wire::tokens_from_json(json("We met"), "reference"), ProtocolMismatch);
}

TEST(WireTest, PredictionsParseStrictly) {
  const json ok = {{"predictions", {{{"word", "dusk"}, {"probability", "0.900000"}}}}};
  EXPECT_EQ(wire::parse_predictions(ok), (std::vector<MaskedPrediction>{{"dusk", 0.9}}));
  EXPECT_THROW(wire::parse_predictions(json::object()), ProtocolMismatch);
  EXPECT_THROW(wire::parse_predictions({{"predictions", {{{"word", "dusk"}}}}}), ProtocolMismatch);
}

TEST(RemoteBackendTest, AgreesWithTheStubItWraps) {
  const StubBackend stub(StubTable::parse(kTable));
  FakeSidecar sidecar(stub);
  const RemoteBackend remote(sidecar.url(), stub.backend_id(), fast_options());

  EXPECT_EQ(remote.backend_id(), stub.backend_id());
  EXPECT_EQ(remote.info().mlm_model_id, "stub-mlm");
  // The fake server reverses predictions; the client restores the order.
  EXPECT_EQ(remote.fill_mask_ranked(kSentence, kSentence.masked(4), 4, 5),
            stub.fill_mask_ranked(kSentence, kSentence.masked(4), 4, 5));
  const TokenSeq h = kSentence.with_word(4, "dusk");
  EXPECT_EQ(remote.entailment_probability(kSentence, h), stub.entailment_probability(kSentence, h));
  EXPECT_EQ(remote.sentence_similarity(kSentence, h), stub.sentence_similarity(kSentence, h));
  EXPECT_EQ(remote.token_probability(kSentence.masked(4), 4, "evening"), 0.98);
  EXPECT_TRUE(remote.is_single_piece("dusk"));
  EXPECT_FALSE(remote.is_single_piece("We"));

  const std::vector<TokenSeq> hyps = {kSentence, h, kSentence.with_word(2, "saw")};
  EXPECT_EQ(remote.entailment_batch(kSentence, hyps), stub.entailment_batch(kSentence, hyps));
  EXPECT_TRUE(remote.entailment_batch(kSentence, {}).empty());
}

TEST(RemoteBackendTest, RefusesAnotherBackendId) {
  const StubBackend stub(StubTable::parse(kTable));
  FakeSidecar sidecar(stub);
  EXPECT_THROW(RemoteBackend(sidecar.url(), "stub-0000000000000000", fast_options()), ProtocolMismatch);
  EXPECT_NO_THROW(RemoteBackend(sidecar.url(), "", fast_options()));
}

TEST(RemoteBackendTest, RefusesResponsesFromAnotherBackend) {
  const StubBackend stub(StubTable::parse(kTable));
  FakeSidecar sidecar(stub);
  const RemoteBackend remote(sidecar.url(), "", fast_options());
  sidecar.answer_with_id("stub-ffffffffffffffff");
  EXPECT_THROW(remote.is_single_piece("dusk"), ProtocolMismatch);
}

TEST(RemoteBackendTest, RejectsFloatsThatAreNotSixDecimalStrings) {
  const StubBackend stub(StubTable::parse(kTable));
  FakeSidecar sidecar(stub);
  const RemoteBackend remote(sidecar.url(), "", fast_options());
  sidecar.send_raw_floats(true);
  EXPECT_THROW(remote.entailment_probability(kSentence, kSentence), ProtocolMismatch);
}

TEST(RemoteBackendTest, RetriesServerErrors) {
  const StubBackend stub(StubTable::parse(kTable));
  FakeSidecar sidecar(stub);
  const RemoteBackend remote(sidecar.url(), "", fast_options());
  sidecar.fail_next(2);
  EXPECT_TRUE(remote.is_single_piece("night"));
  sidecar.fail_next(3);
  EXPECT_THROW(remote.is_single_piece("night"), BackendError);
}

TEST(RemoteBackendTest, UnreachableSidecarIsBackendError) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  RemoteOptions o = fast_options();
  o.max_attempts = 1;
  EXPECT_THROW(RemoteBackend("http://127.0.0.1:" + std::to_string(port), "", o), BackendError);
}

TEST(RemoteBackendTest, CodecRoundTripMatchesLocalStub) {
  const StubBackend stub(StubTable::parse(kTable));
  FakeSidecar sidecar(stub);
  const RemoteBackend remote(sidecar.url(), stub.backend_id(), fast_options());
  const RiskConfig risk = load_stopwords(default_stopwords_path());
  const Document doc = make_document("We met at night again . They left at dusk again .");

  VectorBitSource a(BitStream{1, 0}), b(BitStream{1, 0});
  const auto local = embed_document(doc, a, {}, stub, risk);
  const auto over_wire = embed_document(doc, b, {}, remote, risk);
  EXPECT_EQ(over_wire.watermarked.sentences, local.watermarked.sentences);
  EXPECT_EQ(extract_document(over_wire.watermarked, {}, remote, risk).bits,
            extract_document(local.watermarked, {}, stub, risk).bits);
}

class CachedBackendTest : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = std::filesystem::temp_directory_path() /
            ("ctxmark_cache_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name() + ".jsonl");
    std::filesystem::remove(path_);
  }
  void TearDown() override { std::filesystem::remove(path_); }

  std::filesystem::path path_;
};

TEST_F(CachedBackendTest, AnswersMatchAndRepeatQueriesHit) {
  const StubBackend stub(StubTable::parse(kTable));
  const CachedBackend cached(stub);
  EXPECT_EQ(cached.backend_id(), stub.backend_id());
  const auto first = cached.fill_mask_ranked(kSentence, kSentence.masked(4), 4, 4);
  EXPECT_EQ(first, stub.fill_mask_ranked(kSentence, kSentence.masked(4), 4, 4));
  EXPECT_EQ(cached.fill_mask_ranked(kSentence, kSentence.masked(4), 4, 4), first);
  EXPECT_EQ(cached.misses(), 1u);
  EXPECT_EQ(cached.hits(), 1u);
  // top_k is part of the key.
  cached.fill_mask_ranked(kSentence, kSentence.masked(4), 4, 2);
  EXPECT_EQ(cached.misses(), 2u);
}

TEST_F(CachedBackendTest, BatchForwardsOnlyMisses) {
  const StubBackend stub(StubTable::parse(kTable));
  const CachedBackend cached(stub);
  const TokenSeq h = kSentence.with_word(4, "dusk");
  cached.entailment_probability(kSentence, h);
  const auto scores = cached.entailment_batch(kSentence, {kSentence, h});
  EXPECT_EQ(scores, (std::vector<double>{1.0, 0.99}));
  EXPECT_EQ(cached.hits(), 1u);
  EXPECT_EQ(cached.misses(), 2u);
}

TEST_F(CachedBackendTest, PersistsAcrossInstancesAndSparesTheSidecar) {
  const StubBackend stub(StubTable::parse(kTable));
  FakeSidecar sidecar(stub);
  const RemoteBackend remote(sidecar.url(), "", fast_options());
  const RiskConfig risk = load_stopwords(default_stopwords_path());
  const Document doc = make_document("We met at night again . They left at dusk again .");

  std::size_t cold_requests = 0;
  BitStream bits;
  {
    const CachedBackend cached(remote, path_.string());
    const std::size_t before = sidecar.requests();
    bits = extract_document(doc, {}, cached, risk).bits;
    cold_requests = sidecar.requests() - before;
    EXPECT_GT(cold_requests, 0u);
  }
  const CachedBackend warm(remote, path_.string());
  const std::size_t before = sidecar.requests();
  EXPECT_EQ(extract_document(doc, {}, warm, risk).bits, bits);
  EXPECT_EQ(sidecar.requests(), before);
  EXPECT_EQ(warm.misses(), 0u);
}

TEST_F(CachedBackendTest, EntriesAreScopedByBackendId) {
  const StubBackend a(StubTable::parse(kTable));
  const StubBackend b(StubTable::parse("time\tnight\t0.99\ntime\tnoon\t0.98\n"));
  { CachedBackend(a, path_.string()).is_single_piece("dusk"); }
  const CachedBackend other(b, path_.string());
  EXPECT_FALSE(other.is_single_piece("dusk"));
  EXPECT_EQ(other.misses(), 1u);
}

TEST_F(CachedBackendTest, MalformedCacheFileIsSchemaError) {
  {
    std::FILE* f = std::fopen(path_.c_str(), "w");
    std::fputs("{not json\n", f);
    std::fclose(f);
  }
  const StubBackend stub(StubTable::parse(kTable));
  EXPECT_THROW(CachedBackend(stub, path_.string()), SchemaError);
}

}  // namespace
}  // namespace ctxmark
