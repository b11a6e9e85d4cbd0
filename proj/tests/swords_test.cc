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

#include "ctxmark/swords.hpp"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace ctxmark {
namespace {

std::string fixture(const std::string& name) { return std::string(CTXMARK_FIXTURE_DIR) + "/" + name; }

std::vector<std::vector<std::string>> system_outputs() {
  return nlohmann::json::parse(read_file(fixture("swords_10_system.json")))
      .get<std::vector<std::vector<std::string>>>();
}

TEST(SwordsParseTest, LocatesTargetByByteOffset) {
  const auto insts = load_swords(fixture("swords_10.jsonl"));
  ASSERT_EQ(insts.size(), 10u);
  EXPECT_EQ(insts[0].target(), "bright");
  EXPECT_EQ(insts[0].target_position, 2u);
  EXPECT_EQ(insts[3].target(), "big");
  EXPECT_EQ(insts[9].acceptable.size(), 0u);
}

TEST(SwordsParseTest, RejectsInvalidInstances) {
  auto bad = [](const std::string& line) { EXPECT_THROW(parse_swords(line), SchemaError) << line; };
  bad(R"({"context": "a b", "target_offset": 2, "acceptable": []})");
  bad(R"({"context": "a b", "target_offset": 1, "acceptable": [], "conceivable": []})");
  bad(R"({"context": "a b", "target_offset": -1, "acceptable": [], "conceivable": []})");
  bad(R"({"context": "a b", "target_offset": 2, "acceptable": ["x"], "conceivable": []})");
  bad(R"({"context": "a b", "target_offset": 2, "acceptable": [], "conceivable": ["b"]})");
  bad(R"({"context": "a b", "target_offset": 2, "target": "c", "acceptable": [], "conceivable": []})");
  bad(R"({"context": "a b", "target_offset": 2, "acceptable": [1], "conceivable": []})");
  bad(R"(["context"])");
  bad("{not json");
  EXPECT_EQ(parse_swords("\n\n").size(), 0u);
}

TEST(SwordsScoreTest, StrictExample) {
  const auto insts = load_swords(fixture("swords_10.jsonl"));
  const auto s = score_instance(system_outputs()[0], insts[0], 10, SwordsMode::kStrict);
  EXPECT_EQ(s.considered, 10u);
  EXPECT_EQ(s.acceptable_hits, 4u);
  EXPECT_DOUBLE_EQ(*s.p, 0.4);
  EXPECT_DOUBLE_EQ(*s.r, 4.0 / 6.0);
}

TEST(SwordsScoreTest, EmptyOutputLeavesPrecisionUndefined) {
  const auto insts = load_swords(fixture("swords_10.jsonl"));
  const auto s = score_instance({}, insts[6], 10, SwordsMode::kStrict);
  EXPECT_FALSE(s.p);
  EXPECT_EQ(*s.r, 0.0);
  const auto none = score_instance({"joyful"}, insts[9], 10, SwordsMode::kStrict);
  EXPECT_FALSE(none.r);
}

struct Expected {
  SwordsMode mode;
  std::size_t k;
  double p, r, f, pc, rc, fc;
  std::size_t undefined;
};

// Exact rationals from an independent fractions-based oracle.
const Expected kExpected[] = {
    {SwordsMode::kLenient, 10, 17.0 / 24, 16.0 / 27, 544.0 / 843, 1.0, 953.0 / 1800, 1906.0 / 2753, 2},
    {SwordsMode::kLenient, 3, 17.0 / 24, 5.0 / 9, 170.0 / 273, 1.0, 7.0 / 10, 14.0 / 17, 2},
    {SwordsMode::kStrict, 10, 47.0 / 135, 16.0 / 27, 1504.0 / 3429, 53.0 / 108, 953.0 / 1800,
     50509.0 / 99162, 1},
    {SwordsMode::kStrict, 3, 13.0 / 27, 14.0 / 27, 364.0 / 729, 14.0 / 27, 8.0 / 15, 112.0 / 213, 1},
};

TEST(SwordsScoreTest, FixtureMatchesOracle) {
  const auto insts = load_swords(fixture("swords_10.jsonl"));
  const auto outputs = system_outputs();
  for (const auto& e : kExpected) {
    const auto s = swords_score(outputs, insts, e.k, e.mode);
    SCOPED_TRACE(std::string(to_string(e.mode)) + " k=" + std::to_string(e.k));
    EXPECT_NEAR(s.precision(), e.p, 1e-12);
    EXPECT_NEAR(s.recall(), e.r, 1e-12);
    EXPECT_NEAR(s.f(), e.f, 1e-12);
    EXPECT_NEAR(s.precision_c(), e.pc, 1e-12);
    EXPECT_NEAR(s.recall_c(), e.rc, 1e-12);
    EXPECT_NEAR(s.f_c(), e.fc, 1e-12);
    EXPECT_EQ(s.undefined_precision(), e.undefined);
  }
}

TEST(SwordsScoreTest, LenientNeverBelowStrict) {
  const auto insts = load_swords(fixture("swords_10.jsonl"));
  const auto outputs = system_outputs();
  for (std::size_t k = 1; k <= 12; ++k) {
    EXPECT_GE(swords_score(outputs, insts, k, SwordsMode::kLenient).f(),
              swords_score(outputs, insts, k, SwordsMode::kStrict).f())
        << k;
  }
}

TEST(SwordsScoreTest, ChecksArguments) {
  const auto insts = load_swords(fixture("swords_10.jsonl"));
  EXPECT_THROW(swords_score(system_outputs(), insts, 0, SwordsMode::kStrict), ContractViolation);
  EXPECT_THROW(swords_score({}, insts, 10, SwordsMode::kStrict), ContractViolation);
}

}  // namespace
}  // namespace ctxmark
