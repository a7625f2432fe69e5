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
#include "sibmatch/mechanisms.h"
#include "sibmatch/oracle.h"
#include "sibmatch/stability.h"
#include "support.h"

namespace sibmatch {
namespace {

TEST(MechanismsTest, DeferredAcceptanceIsStudentOptimalStable) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 60; ++k) {
    const Instance inst = testing::tiny_instance(rng);
    const auto lot = draw_lotteries(inst, TieBreakingRule::kMTB, k);
    const Matching da = deferred_acceptance(inst, lot).matching;
    EXPECT_TRUE(verify_initial_stable(inst, lot, da).stable);
    const StableSet set = stable_set(inst, lot, StableKind::kInitial);
    bool found = false;
    for (const StableMember& m : set.members) {
      found |= m.matching == da;
      for (int s = 0; s < inst.num_students(); ++s)
        EXPECT_TRUE(inst.weakly_prefers(s, da[s], m.matching[s]));
    }
    EXPECT_TRUE(found);
  }
}

TEST(MechanismsTest, SingletonFamiliesMakeAllMechanismsAgree) {
  std::mt19937_64 rng(5);
  testing::TinyConfig cfg;
  cfg.sibling_prob = 0.0;
  for (int k = 0; k < 40; ++k) {
    const Instance inst = testing::tiny_instance(rng, cfg);
    const auto lot = draw_lotteries(inst, TieBreakingRule::kSTB, k);
    const Matching da = deferred_acceptance(inst, lot).matching;
    EXPECT_EQ(descending(inst, lot).matching, da);
    EXPECT_EQ(ascending(inst, lot).matching, da);
  }
}

TEST(MechanismsTest, OneLevelMakesSequentialEqualDa) {
  std::mt19937_64 rng(9);
  testing::TinyConfig cfg;
  cfg.num_levels = 1;
  for (int k = 0; k < 40; ++k) {
    const Instance inst = testing::tiny_instance(rng, cfg);
    const auto lot = draw_lotteries(inst, TieBreakingRule::kMTBF, k);
    const Matching da = deferred_acceptance(inst, lot).matching;
    EXPECT_EQ(descending(inst, lot).matching, da);
    EXPECT_EQ(ascending(inst, lot).matching, da);
  }
}

TEST(MechanismsTest, OrderMattersFixture) {
  const Fixture fx = fixture("appendixF-order-matters");
  EXPECT_EQ(descending(fx.instance, fx.lottery).matching, fx.matching("descending"));
  EXPECT_EQ(ascending(fx.instance, fx.lottery).matching, fx.matching("ascending"));
}

TEST(MechanismsTest, TraceCoversEveryLevelInOrder) {
  const Fixture fx = fixture("appendixF-order-matters");
  const auto desc = descending(fx.instance, fx.lottery);
  ASSERT_EQ(desc.per_level_trace.size(), 2u);
  EXPECT_EQ(desc.per_level_trace[0].level, 1);
  EXPECT_EQ(desc.per_level_trace[1].level, 0);
  // The younger sibling sees the older one's school boosted.
  bool boosted = false;
  for (const GroupEntry& e : desc.per_level_trace[1].groups) {
    boosted |= fx.instance.student(e.student).id == "f1" && e.g == 1;
  }
  EXPECT_TRUE(boosted);
  const auto asc = ascending(fx.instance, fx.lottery);
  EXPECT_EQ(asc.per_level_trace[0].level, 0);
}

TEST(MechanismsTest, SequentialOutputsAreFeasible) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 60; ++k) {
    const Instance inst = testing::tiny_instance(rng);
    const auto lot = draw_lotteries(inst, TieBreakingRule::kMTBF, k);
    EXPECT_TRUE(is_valid_matching(inst, descending(inst, lot).matching));
    EXPECT_TRUE(is_valid_matching(inst, ascending(inst, lot).matching));
  }
}

TEST(MechanismsTest, GroupOverrideChangesPriority) {
  const Fixture fx = fixture("example1");
  const Instance& I = fx.instance;
  GroupMap groups;
  groups.num_groups = 2;
  groups.g.assign(I.num_students() * I.num_schools(), 2);
  groups.g[I.student_index("f2p")] = 1;
  const Matching mu = deferred_acceptance(I, fx.lottery, &groups).matching;
  EXPECT_EQ(mu[I.student_index("f2p")], 0);
  EXPECT_EQ(mu[I.student_index("f1")], kUnassigned);
  EXPECT_EQ(mu[I.student_index("s3")], 0);
}

}  // namespace
}  // namespace sibmatch
