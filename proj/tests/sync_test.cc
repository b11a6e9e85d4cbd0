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

#include "ctxmark/sync.hpp"

#include <string>

#include "gtest/gtest.h"

#include "ctxmark/stub_backend.hpp"
#include "support/stub_corpus.hpp"

namespace ctxmark {
namespace {

constexpr const char* kTimeTable =
    "time\tnight\t0.99\ntime\tevening\t0.98\ntime\tdusk\t0.90\nmet\tmet\t0.5\n";

const TokenSeq kSentence{"We", "met", "at", "night", "again", "."};

RiskConfig stopwords() { return load_stopwords(default_stopwords_path()); }

TEST(FinalCandidatesTest, TakesTopTwoAboveThreshold) {
  RankedCandidates rc;
  rc.ranked = {{"a", 0.5, 1.0}, {"b", 0.4, 0.96}, {"c", 0.9, 0.95}};
  const auto fc = final_candidates(rc, 0.95);
  ASSERT_TRUE(fc);
  EXPECT_EQ(fc->first.word, "a");
  EXPECT_EQ(fc->second.word, "b");
  EXPECT_FALSE(final_candidates(rc, 0.96));
  EXPECT_THROW(final_candidates(rc, 1.0), ContractViolation);
  EXPECT_THROW(final_candidates(rc, 0.0), ContractViolation);
}

TEST(CandidatePairTest, SortsAndMapsBits) {
  const CandidatePair p("night", "evening");
  EXPECT_EQ(p.c1(), "evening");
  EXPECT_EQ(p.c2(), "night");
  EXPECT_EQ(p.word_for(0), "evening");
  EXPECT_EQ(p.bit_of("night"), 1);
  EXPECT_FALSE(p.bit_of("dusk"));
  EXPECT_EQ(p, CandidatePair("evening", "night"));
  EXPECT_THROW(CandidatePair("a", "a"), ContractViolation);
}

TEST(SynchronicityTest, SymmetricPairSynchronizes) {
  const StubBackend b(StubTable::parse(kTimeTable));
  for (const char* w : {"night", "evening"}) {
    const SyncResult r = synchronicity_test(4, kSentence.with_word(4, w), b, {});
    EXPECT_TRUE(r.sync) << w;
    EXPECT_TRUE(r.target_in_candidates);
    EXPECT_EQ(r.candidates, CandidatePair("evening", "night"));
  }
}

TEST(SynchronicityTest, AsymmetricFinalistsDoNotSynchronize) {
  // FC(dusk) = {dusk, night} but FC(night) = {night, evening}.
  const StubBackend b(StubTable::parse(kTimeTable));
  const SyncResult r = synchronicity_test(4, kSentence.with_word(4, "dusk"), b, {});
  EXPECT_FALSE(r.sync);
  EXPECT_TRUE(r.target_in_candidates);
  EXPECT_EQ(r.candidates, CandidatePair("dusk", "night"));
}

TEST(SynchronicityTest, TargetOutsideFinalistsDoesNotSynchronize) {
  const StubBackend b(StubTable::parse(kTimeTable));
  SyncOptions opts;
  opts.k = 2;  // generation keeps night and evening only
  const SyncResult r = synchronicity_test(4, kSentence.with_word(4, "dusk"), b, opts);
  EXPECT_FALSE(r.sync);
  EXPECT_FALSE(r.target_in_candidates);
  EXPECT_EQ(r.candidates, CandidatePair("evening", "night"));
}

TEST(SynchronicityTest, SingleCandidateHasNoPair) {
  const StubBackend b(StubTable::parse(kTimeTable));
  const SyncResult r = synchronicity_test(2, kSentence, b, {});
  EXPECT_FALSE(r.sync);
  EXPECT_FALSE(r.candidates);
}

TEST(SynchronicityTest, ThresholdGatesFinalists) {
  const StubBackend b(StubTable::parse(kTimeTable));
  SyncOptions opts;
  opts.sr_threshold = 0.995;  // only the target itself (SR 1.0) survives
  EXPECT_FALSE(synchronicity_test(4, kSentence, b, opts).sync);
}

// Every synchronized slot stays synchronized, with the same pair, when its
// word is exchanged for the other candidate.
TEST(SynchronicityTest, ExchangePropertyOnCorpus) {
  testing::CorpusOptions co;
  co.sentences = 150;
  const auto corpus = testing::make_stub_corpus(co);
  const StubBackend b(StubTable::parse(corpus.table));
  const RiskConfig risk = stopwords();
  std::size_t checked = 0;
  for (const auto& s : split_sentences(corpus.text)) {
    for (Position i = 2; i < s.size(); ++i) {
      if (is_risk_token(s.word(i), risk, b)) continue;
      const TokenSeq local = s.prefix(i + 1);
      const SyncResult r = synchronicity_test(i, local, b, {});
      if (!r.sync) continue;
      const std::string other = r.candidates->c1() == s.word(i) ? r.candidates->c2() : r.candidates->c1();
      const SyncResult swapped = synchronicity_test(i, local.with_word(i, other), b, {});
      EXPECT_TRUE(swapped.sync);
      EXPECT_EQ(swapped.candidates, r.candidates);
      ++checked;
    }
  }
  EXPECT_GT(checked, 200u);
}

class SubstitutabilityTest : public ::testing::Test {
 protected:
  SubstitutabilityTest()
      : backend_(StubBackend::from_file(std::string(CTXMARK_FIXTURE_DIR) + "/substitutability.tsv")),
        risk_(stopwords()) {}

  StubBackend backend_;
  RiskConfig risk_;
  const TokenSeq sentence_{"They", "heard", "sound", "noise", "today", "."};
};

TEST_F(SubstitutabilityTest, CarrierIsSynchronized) {
  const SyncResult r = synchronicity_test(4, sentence_.prefix(5), backend_, {});
  EXPECT_TRUE(r.sync);
  EXPECT_EQ(r.candidates, CandidatePair("din", "noise"));
  // The preceding word only synchronizes once "din" follows it.
  EXPECT_FALSE(synchronicity_test(3, sentence_.prefix(4), backend_, {}).sync);
  EXPECT_TRUE(synchronicity_test(3, sentence_.prefix(4).with_word(4, "din"), backend_, {}).sync);
}

TEST_F(SubstitutabilityTest, RejectsCandidateThatWakesThePreviousWord) {
  EXPECT_FALSE(substitutability_test(4, sentence_.prefix(5), CandidatePair("din", "noise"), backend_,
                                     risk_, {}));
}

TEST_F(SubstitutabilityTest, PassesWhenNeighbourCannotCarry) {
  const TokenSeq plain{"They", "heard", "loud", "noise", "today", "."};
  // "loud" is not single-piece, hence a risk token.
  EXPECT_TRUE(substitutability_test(4, plain.prefix(5), CandidatePair("din", "noise"), backend_,
                                    risk_, {}));
  const TokenSeq at_start{"They", "noise", "today", "."};
  EXPECT_TRUE(substitutability_test(2, at_start.prefix(3), CandidatePair("din", "noise"), backend_,
                                    risk_, {}));
  EXPECT_TRUE(substitutability_test(3, sentence_.prefix(4), CandidatePair("din", "noise"), backend_,
                                    risk_, {}));
  EXPECT_THROW(substitutability_test(1, sentence_, CandidatePair("din", "noise"), backend_, risk_, {}),
               ContractViolation);
}

}  // namespace
}  // namespace ctxmark
