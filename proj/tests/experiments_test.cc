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

#include <cmath>

#include "sibmatch/error.h"
#include "sibmatch/experiments/fixtures.h"
#include "sibmatch/experiments/generator.h"
#include "sibmatch/experiments/harness.h"
#include "sibmatch/experiments/metrics.h"
#include "sibmatch/experiments/stats.h"
#include "sibmatch/mechanisms.h"

namespace sibmatch {
namespace {

TEST(FixturesTest, RegistryIsComplete) {
  const auto names = fixture_names();
  EXPECT_EQ(names.size(), 10u);
  for (const std::string& n : names) {
    const Fixture fx = fixture(n);
    EXPECT_EQ(fx.name, n);
    for (const auto& [key, mu] : fx.matchings) EXPECT_TRUE(is_valid_matching(fx.instance, mu)) << n << " " << key;
  }
  try {
    fixture("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFixture);
  }
  EXPECT_THROW(fixture("example1").matching("nope"), Error);
}

TEST(MetricsTest, ExampleOne) {
  const Fixture fx = fixture("example1");
  const OutcomeMetrics m = metrics(fx.instance, fx.matching("mu"));
  EXPECT_EQ(m.top_pref, 4);
  EXPECT_EQ(m.unassigned, 3);
  EXPECT_EQ(m.together, 0);
  EXPECT_EQ(m.separated_none, 2);  // f1p and f2p
  EXPECT_EQ(m.separated_one, 0);
  EXPECT_EQ(m.separated_both, 0);
  EXPECT_EQ(m.rank_histogram, (std::vector<std::int64_t>{4}));
  EXPECT_EQ(metrics(fx.instance, fx.matching("mu_prime")).together, 4);
}

TEST(MetricsTest, PropOneSeparations) {
  const Fixture fx = fixture("prop1-absolute-nonexistence");
  const OutcomeMetrics m = metrics(fx.instance, fx.matching("mu"));
  EXPECT_EQ(m.together, 0);
  EXPECT_EQ(m.separated_one, 2);  // a1 at c4, a2 out, both list c3 first
  EXPECT_EQ(m.separated_both, 0);
  EXPECT_EQ(m.unassigned, 1);
}

TEST(MetricsTest, RejectsInvalidMatching) {
  const Fixture fx = fixture("example1");
  EXPECT_THROW(metrics(fx.instance, Matching(7, 0)), Error);
}

TEST(StatsTest, MeanAndStandardError) {
  const MeanSe m = mean_se({1, 2, 3});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_NEAR(m.se, 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(m.n, 3);
  EXPECT_EQ(mean_se({5}).se, 0.0);
  EXPECT_EQ(mean_se({}).n, 0);
}

TEST(StatsTest, SignTest) {
  const SignTest t = sign_test({2, 2, 2, 1}, {1, 1, 1, 1});
  EXPECT_EQ(t.positive, 3);
  EXPECT_EQ(t.negative, 0);
  EXPECT_EQ(t.ties, 1);
  EXPECT_NEAR(t.p_value, 0.125, 1e-12);
  // 9 of 10 positive: P(X >= 9) = 11/1024.
  std::vector<double> a(10, 1), b(10, 0);
  b[0] = 2;
  EXPECT_NEAR(sign_test(a, b).p_value, 11.0 / 1024, 1e-12);
  EXPECT_EQ(sign_test({1}, {1}).p_value, 1.0);
}

TEST(GeneratorTest, ValidationListsEveryProblem) {
  GeneratorConfig c;
  c.num_students = 0;
  c.family_share = {0.5, 0.2};
  c.sibling_overlap = 2;
  try {
    validate_generator_config(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_EQ(e.details().size(), 3u);
  }
}

TEST(GeneratorTest, ShapeAndDeterminism) {
  GeneratorConfig c;
  c.num_students = 120;
  c.num_schools = 10;
  const Instance a = generate(c);
  const Instance b = generate(c);
  EXPECT_EQ(a.num_students(), 120);
  EXPECT_EQ(a.num_schools(), 10);
  EXPECT_EQ(a.num_levels(), 3);
  int seats[3] = {0, 0, 0};
  for (int s = 0; s < a.num_students(); ++s) {
    EXPECT_EQ(a.student(s).prefs, b.student(s).prefs);
    EXPECT_GE(a.student(s).prefs.size(), 1u);
    EXPECT_LE(a.student(s).prefs.size(), 8u);
  }
  for (int c2 = 0; c2 < a.num_schools(); ++c2)
    for (int l = 0; l < 3; ++l) seats[l] += a.capacity(c2, l);
  for (int l = 0; l < 3; ++l)
    EXPECT_EQ(seats[l], static_cast<int>(a.students_at_level(l).size()));
  for (const Family& f : a.families()) EXPECT_LE(f.members.size(), 3u);
  c.seed = 2;
  const Instance other = generate(c);
  bool differs = false;
  for (int s = 0; s < 120; ++s) differs |= other.student(s).prefs != a.student(s).prefs;
  EXPECT_TRUE(differs);
}

TEST(GeneratorTest, JsonRoundTrip) {
  GeneratorConfig c;
  c.num_students = 42;
  c.popularity_skew = 1.5;
  c.seed = 9;
  const GeneratorConfig back = generator_config_from_json(generator_config_to_json(c));
  EXPECT_EQ(generator_config_to_json(back), generator_config_to_json(c));
  EXPECT_EQ(back.num_students, 42);
  // Missing keys keep defaults.
  EXPECT_EQ(generator_config_from_json(Json::object()).num_students, 200);
}

TEST(HarnessTest, MethodNames) {
  for (const char* n : {"sosm", "descending", "ascending", "fosm", "absolute-hard",
                        "absolute-soft", "partial-hard", "partial-soft", "hybrid:3"}) {
    const auto m = parse_method(n);
    ASSERT_TRUE(m.has_value()) << n;
    EXPECT_EQ(m->name(), n);
  }
  EXPECT_EQ(parse_method("da")->method, Method::kSOSM);
  EXPECT_FALSE(parse_method("hybrid:x").has_value());
  EXPECT_FALSE(parse_method("hybrid:-1").has_value());
}

TEST(HarnessTest, RunMethodOnFixtures) {
  const Fixture p1 = fixture("prop1-absolute-nonexistence");
  const MethodOutcome hard = run_method(p1.instance, p1.lottery, *parse_method("absolute-hard"));
  EXPECT_FALSE(hard.solved);
  EXPECT_EQ(hard.status, "INFEASIBLE");
  const MethodOutcome soft = run_method(p1.instance, p1.lottery, *parse_method("absolute-soft"));
  EXPECT_TRUE(soft.solved);
  EXPECT_TRUE(soft.verified);
  const MethodOutcome da = run_method(p1.instance, p1.lottery, *parse_method("sosm"));
  EXPECT_EQ(da.matching, p1.matching("mu"));
  EXPECT_TRUE(da.verified);
}

TEST(HarnessTest, ExperimentIsReproducibleAcrossJobs) {
  GeneratorConfig g;
  g.num_students = 30;
  g.num_schools = 5;
  ExperimentConfig cfg;
  cfg.replications = 4;
  cfg.rules = {TieBreakingRule::kMTBF, TieBreakingRule::kSTB};
  for (const char* n : {"sosm", "descending", "fosm", "absolute-hard"})
    cfg.methods.push_back(*parse_method(n));
  const ExperimentReport one = run_experiment(generator_source(g), cfg);
  cfg.jobs = 3;
  const ExperimentReport three = run_experiment(generator_source(g), cfg);
  EXPECT_EQ(report_to_csv(one), report_to_csv(three));
  ASSERT_EQ(one.cells.size(), 8u);
  ASSERT_EQ(one.runs.size(), 32u);
  for (const RunRecord& r : one.runs) {
    if (r.outcome.solved) {
      EXPECT_TRUE(r.outcome.verified) << r.method;
    }
  }
  const auto sosm = paired_metric(one, "sosm", TieBreakingRule::kMTBF, &OutcomeMetrics::together);
  const auto fosm = paired_metric(one, "fosm", TieBreakingRule::kMTBF, &OutcomeMetrics::together);
  ASSERT_EQ(sosm.size(), 4u);
  for (int r = 0; r < 4; ++r) EXPECT_GE(*fosm[r], *sosm[r]);
  const std::string csv = report_to_csv(one);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "method,rule,zeta,solved,top_pref_mean,top_pref_se,unassigned_mean,"
            "unassigned_se,together_mean,together_se,sep_none_mean,sep_none_se,"
            "sep_one_mean,sep_one_se,sep_both_mean,sep_both_se");
}

TEST(HarnessTest, ZetaSweepCells) {
  ExperimentConfig cfg;
  cfg.replications = 2;
  const ExperimentReport rep =
      zeta_sweep(fixed_source(fixture("example1").instance), {0, 1, 2}, cfg);
  ASSERT_EQ(rep.cells.size(), 3u);
  // Two providers would need both families at c, which is never stable.
  EXPECT_EQ(rep.cells[0].solved, 2);
  EXPECT_EQ(rep.cells[1].solved, 2);
  EXPECT_EQ(rep.cells[2].solved, 0);
  EXPECT_EQ(*rep.cells[2].zeta, 2);
  EXPECT_GE(rep.cells[1].together.mean, rep.cells[0].together.mean);
  EXPECT_EQ(rep.cells[1].together.mean, 2.0);
  EXPECT_NE(report_to_csv(rep).find("\nhybrid,mtb-f,1,"), std::string::npos);
}

TEST(HarnessTest, ReplicationSeedsDiffer) {
  EXPECT_EQ(replication_seed(1, 3, TieBreakingRule::kMTBF),
            replication_seed(1, 3, TieBreakingRule::kMTBF));
  EXPECT_NE(replication_seed(1, 3, TieBreakingRule::kMTBF),
            replication_seed(1, 4, TieBreakingRule::kMTBF));
  EXPECT_NE(replication_seed(1, 3, TieBreakingRule::kMTBF),
            replication_seed(1, 3, TieBreakingRule::kSTB));
}

}  // namespace
}  // namespace sibmatch
