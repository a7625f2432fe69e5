// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>

#include "sibmatch/experiments/fixtures.h"
#include "sibmatch/lottery.h"
#include "support.h"

namespace sibmatch {
namespace {

TEST(LotteryTest, RuleNamesRoundTrip) {
  for (auto rule : {TieBreakingRule::kSTB, TieBreakingRule::kMTB,
                    TieBreakingRule::kSTBF, TieBreakingRule::kMTBF}) {
    EXPECT_EQ(ParseRule(RuleName(rule)), rule);
  }
  EXPECT_FALSE(ParseRule("lottery").has_value());
  EXPECT_TRUE(IsFamilyRule(TieBreakingRule::kMTBF));
  EXPECT_FALSE(IsFamilyRule(TieBreakingRule::kMTB));
}

class DrawTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(7);
    testing::TinyConfig cfg;
    cfg.max_students = 8;
    cfg.sibling_prob = 0.8;
    inst = testing::tiny_instance(rng, cfg);
  }
  Instance inst;
};

TEST_F(DrawTest, SameSeedSameDraw) {
  for (auto rule : {TieBreakingRule::kSTB, TieBreakingRule::kMTBF}) {
    const auto a = draw_lotteries(inst, rule, 11);
    const auto b = draw_lotteries(inst, rule, 11);
    const auto c = draw_lotteries(inst, rule, 12);
    bool differs = false;
    for (int s = 0; s < inst.num_students(); ++s) {
      for (int k = 0; k < inst.num_schools(); ++k) {
        EXPECT_EQ(a.key(s, k), b.key(s, k));
        differs |= a.key(s, k) != c.key(s, k);
      }
    }
    EXPECT_TRUE(differs);
    EXPECT_TRUE(a.keys_distinct());
  }
}

TEST_F(DrawTest, SingleRulesShareKeysAcrossSchools) {
  for (auto rule : {TieBreakingRule::kSTB, TieBreakingRule::kSTBF}) {
    const auto lot = draw_lotteries(inst, rule, 3);
    for (int s = 0; s < inst.num_students(); ++s) {
      for (int c = 1; c < inst.num_schools(); ++c) EXPECT_EQ(lot.key(s, c), lot.key(s, 0));
    }
  }
}

TEST_F(DrawTest, FamilyRulesKeepSiblingsAdjacent) {
  for (auto rule : {TieBreakingRule::kSTBF, TieBreakingRule::kMTBF}) {
    const auto lot = draw_lotteries(inst, rule, 5);
    const InitialOrder order(inst, lot);
    for (int c = 0; c < inst.num_schools(); ++c) {
      // Members of one family occupy a contiguous block of the order.
      const auto& ord = order.order(c);
      for (const Family& f : inst.families()) {
        int lo = inst.num_students(), hi = -1;
        for (StudentIdx s : f.members) {
          lo = std::min(lo, order.position(c, s));
          hi = std::max(hi, order.position(c, s));
        }
        EXPECT_EQ(hi - lo + 1, static_cast<int>(f.members.size()));
        const FamilyIdx fam = inst.student(f.members[0]).family;
        for (int k = lo; k <= hi; ++k) EXPECT_EQ(inst.student(ord[k]).family, fam);
      }
    }
  }
}

TEST(InitialOrderTest, FollowsRankingOnExampleOne) {
  const Fixture fx = fixture("example1");
  const auto order = initial_order(fx.instance, fx.lottery, 0);
  std::vector<std::string> ids;
  for (StudentIdx s : order) ids.push_back(fx.instance.student(s).id);
  EXPECT_EQ(ids, (std::vector<std::string>{"s1", "s2", "s3", "f1", "f1p", "f2", "f2p"}));
}

TEST(InitialOrderTest, GroupsComeBeforeLottery) {
  InstanceSpec spec;
  spec.levels = {"l1"};
  spec.schools = {{"c", {{"l1", 1}}}};
  spec.students = {{"a", "a", "l1", {"c"}}, {"b", "b", "l1", {"c"}}};
  spec.groups = {{"b", "c", 1}};
  spec.num_groups = 2;
  const Instance inst = validate_instance(spec);
  const auto lot = LotteryProfile::FromRanking(inst, {0, 1});
  EXPECT_EQ(initial_order(inst, lot, 0), (std::vector<StudentIdx>{1, 0}));
}

}  // namespace
}  // namespace sibmatch
