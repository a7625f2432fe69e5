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

#include <algorithm>
#include <random>

#include "sibmatch/error.h"
#include "sibmatch/experiments/fixtures.h"
#include "sibmatch/oracle.h"
#include "sibmatch/stability.h"
#include "support.h"

namespace sibmatch {
namespace {

class ExampleOne : public ::testing::Test {
 protected:
  ExampleOne() : fx(fixture("example1")), I(fx.instance) {}
  StudentIdx id(const char* s) const { return I.student_index(s); }
  Fixture fx;
  const Instance& I;
};

TEST_F(ExampleOne, ProviderCandidates) {
  const PairList dp = provider_candidates(I, fx.lottery, fx.matching("mu_double_prime"));
  EXPECT_NE(std::find(dp.begin(), dp.end(), std::make_pair(id("f1"), 0)), dp.end());
  const PairList p = provider_candidates(I, fx.lottery, fx.matching("mu_prime"));
  EXPECT_EQ(std::find(p.begin(), p.end(), std::make_pair(id("f1p"), 0)), p.end());
}

TEST_F(ExampleOne, HardProvidersPickLowestKey) {
  const ProviderSelection z =
      effective_providers_hard(I, fx.lottery, fx.matching("mu_double_prime"));
  EXPECT_EQ(z, (ProviderSelection{{id("f1"), 0}}));
}

TEST_F(ExampleOne, AbsoluteOrderLetsReceiverDisplace) {
  const ContingentOrder ord = contingent_order_absolute(
      I, fx.lottery, fx.matching("mu_double_prime"), {{id("f1"), 0}});
  EXPECT_TRUE(ord.higher(0, id("f2"), id("s3")));
}

TEST_F(ExampleOne, PartialOrderPlacesReceiverRightAfterProvider) {
  const ContingentOrder ord =
      contingent_order_partial(I, fx.lottery, fx.matching("mu"), {{id("f1"), 0}});
  const auto order = ord.order(0);
  const auto pos = [&](const char* s) {
    return std::find(order.begin(), order.end(), id(s)) - order.begin();
  };
  EXPECT_EQ(pos("f1") + 1, pos("f2"));
  EXPECT_LT(pos("s3"), pos("f2"));
}

TEST_F(ExampleOne, ContingentVerdicts) {
  const ProviderSelection z = {{id("f1"), 0}};
  EXPECT_TRUE(verify_contingent_stable(I, fx.lottery, fx.matching("mu_double_prime"), &z,
                                       PriorityKind::kAbsolute, Enforcement::kSoft)
                  .stable);
  const StabilityReport bad = verify_contingent_stable(
      I, fx.lottery, fx.matching("mu"), &z, PriorityKind::kAbsolute, Enforcement::kSoft);
  EXPECT_FALSE(bad.stable);
  EXPECT_NE(std::find(bad.envy_triples.begin(), bad.envy_triples.end(),
                      EnvyTriple{id("f2"), id("s3"), 0}),
            bad.envy_triples.end());
  EXPECT_TRUE(verify_contingent_stable(I, fx.lottery, fx.matching("mu"), &z,
                                       PriorityKind::kPartial, Enforcement::kSoft)
                  .stable);
}

TEST_F(ExampleOne, SoftSearchRejectsFamiliesOnlyMatching) {
  for (auto kind : {PriorityKind::kAbsolute, PriorityKind::kPartial}) {
    EXPECT_FALSE(soft_stability_exists(I, fx.lottery, fx.matching("mu_prime"), kind).exists);
  }
}

TEST_F(ExampleOne, HardVerifyRejectsForeignProviders) {
  const ProviderSelection z = {{id("f2"), 0}};
  try {
    verify_contingent_stable(I, fx.lottery, fx.matching("mu_double_prime"), &z,
                             PriorityKind::kAbsolute, Enforcement::kHard);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentZ);
  }
}

TEST(StabilityTest, PropOneMatchingIsInitiallyStable) {
  const Fixture fx = fixture("prop1-absolute-nonexistence");
  const Matching& mu = fx.matching("mu");
  EXPECT_TRUE(verify_initial_stable(fx.instance, fx.lottery, mu).stable);
  const auto soft = soft_stability_exists(fx.instance, fx.lottery, mu, PriorityKind::kAbsolute);
  EXPECT_TRUE(soft.exists);
  EXPECT_TRUE(soft.witness.empty());
}

TEST(StabilityTest, PropOneWastefulVariant) {
  const Fixture fx = fixture("prop1-absolute-nonexistence");
  const Instance& I = fx.instance;
  Matching mu = fx.matching("mu");
  mu[I.student_index("d1")] = I.school_index("c2");
  mu[I.student_index("x1")] = kUnassigned;
  const StabilityReport r = verify_initial_stable(I, fx.lottery, mu);
  EXPECT_FALSE(r.stable);
  const auto waste = std::make_pair(I.student_index("a1"), I.school_index("c3"));
  EXPECT_NE(std::find(r.wasteful_pairs.begin(), r.wasteful_pairs.end(), waste),
            r.wasteful_pairs.end());
}

TEST(StabilityTest, EmptyMatchingIsWastefulEverywhere) {
  const Fixture fx = fixture("example1");
  const StabilityReport r = verify_initial_stable(
      fx.instance, fx.lottery, Matching(fx.instance.num_students(), kUnassigned));
  EXPECT_EQ(r.wasteful_pairs.size(), 7u);
}

TEST(StabilityTest, EmptySelectionKeepsInitialOrder) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 40; ++k) {
    const Instance inst = testing::tiny_instance(rng);
    const auto lot = draw_lotteries(inst, TieBreakingRule::kMTB, k);
    const Matching mu = testing::random_matching(inst, rng);
    const ContingentOrder ord = contingent_order_absolute(inst, lot, mu, {});
    for (int c = 0; c < inst.num_schools(); ++c)
      EXPECT_EQ(ord.order(c), initial_order(inst, lot, c));
  }
}

TEST(StabilityTest, CandidatesMatchDefinition) {
  std::mt19937_64 rng(17);
  testing::TinyConfig cfg;
  cfg.sibling_prob = 0.7;
  for (int k = 0; k < 300; ++k) {
    const Instance inst = testing::tiny_instance(rng, cfg);
    const auto lot = draw_lotteries(inst, TieBreakingRule::kMTB, k);
    const Matching mu = testing::random_matching(inst, rng);
    const PairList got = provider_candidates(inst, lot, mu);
    PairList want;
    for (int s = 0; s < inst.num_students(); ++s) {
      if (testing::direct_candidate(inst, lot, mu, s)) want.emplace_back(s, mu[s]);
    }
    EXPECT_EQ(got, want);
  }
}

// Siblings on distinct levels; with same-level siblings a receiver can pass
// an unmatched sibling under partial priority.
TEST(StabilityTest, PartialWithFamilyLotteriesEqualsInitial) {
  std::mt19937_64 rng(41);
  testing::TinyConfig cfg;
  cfg.max_students = 6;
  cfg.sibling_prob = 0.7;
  cfg.distinct_levels = true;
  for (int k = 0; k < 40; ++k) {
    const Instance inst = testing::tiny_instance(rng, cfg);
    const auto lot = draw_lotteries(inst, TieBreakingRule::kMTBF, k);
    enumerate_matchings(inst, [&](const Matching& mu) {
      const bool initial = verify_initial_stable(inst, lot, mu).stable;
      const ProviderSelection z = effective_providers_hard(inst, lot, mu);
      const bool partial = verify_contingent_stable(inst, lot, mu, &z, PriorityKind::kPartial,
                                                    Enforcement::kSoft)
                               .stable;
      // The provider-existence check may reject extra matchings; envy never adds any.
      EXPECT_TRUE(!partial || initial);
      if (testing::direct_provider_existence(inst, lot, mu)) {
        EXPECT_EQ(partial, initial);
      }
      return true;
    });
  }
}

TEST(StabilityTest, SoftSearchGuard) {
  std::mt19937_64 rng(2);
  const Instance inst = testing::tiny_instance(rng);
  const auto lot = draw_lotteries(inst, TieBreakingRule::kMTB, 1);
  const Matching mu(inst.num_students(), kUnassigned);
  EXPECT_NO_THROW(soft_stability_exists(inst, lot, mu, PriorityKind::kAbsolute, 0));
}

}  // namespace
}  // namespace sibmatch
