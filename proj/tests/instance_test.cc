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

#include "sibmatch/error.h"
#include "sibmatch/experiments/fixtures.h"
#include "sibmatch/instance.h"

namespace sibmatch {
namespace {

InstanceSpec SmallSpec() {
  InstanceSpec spec;
  spec.levels = {"l1", "l2"};
  spec.schools = {{"c1", {{"l1", 1}, {"l2", 1}}}, {"c2", {{"l1", 2}, {"l2", 0}}}};
  spec.students = {{"a", "fa", "l1", {"c2", "c1"}},
                   {"b", "fa", "l2", {"c1", "c2"}},
                   {"c", "fc", "l1", {"c1"}}};
  return spec;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TEST(InstanceTest, DerivedTablesMatchSpec) {
  const Instance inst = validate_instance(SmallSpec());
  EXPECT_EQ(inst.num_students(), 3);
  EXPECT_EQ(inst.num_schools(), 2);
  EXPECT_EQ(inst.num_levels(), 2);
  EXPECT_EQ(inst.num_families(), 2);
  EXPECT_TRUE(inst.are_siblings(0, 1));
  EXPECT_FALSE(inst.are_siblings(0, 2));
  EXPECT_EQ(inst.students_at_level(0), (std::vector<StudentIdx>{0, 2}));
  EXPECT_EQ(inst.capacity(1, 1), 0);
  EXPECT_FALSE(inst.feasible(1, 1));  // listed but no seat at its level
  EXPECT_TRUE(inst.feasible(1, 0));
  EXPECT_TRUE(inst.prefers(0, 1, 0));
  EXPECT_TRUE(inst.prefers(2, 0, kUnassigned));
}

TEST(InstanceTest, RankUsesPenaltyForUnassigned) {
  Instance inst = validate_instance(SmallSpec());
  EXPECT_EQ(inst.rank(0, 1), 1);
  EXPECT_EQ(inst.rank(0, 0), 2);
  EXPECT_EQ(inst.rank(2, kUnassigned), 2);
  inst.set_penalty(UnassignedPenalty::kSchoolCountPlusOne);
  EXPECT_EQ(inst.rank(2, kUnassigned), 3);
  EXPECT_EQ(CodeOf([&] { inst.rank(1, 1); }), ErrorCode::kPairNotFeasible);
}

TEST(InstanceTest, RejectsMalformedSpecs) {
  auto dup = SmallSpec();
  dup.students[1].id = "a";
  EXPECT_EQ(CodeOf([&] { validate_instance(dup); }), ErrorCode::kValidation);
  auto unknown = SmallSpec();
  unknown.students[0].prefs.push_back("c9");
  EXPECT_EQ(CodeOf([&] { validate_instance(unknown); }), ErrorCode::kValidation);
  auto repeated = SmallSpec();
  repeated.students[0].prefs = {"c1", "c1"};
  EXPECT_EQ(CodeOf([&] { validate_instance(repeated); }), ErrorCode::kValidation);
  auto level = SmallSpec();
  level.students[2].level = "l7";
  EXPECT_EQ(CodeOf([&] { validate_instance(level); }), ErrorCode::kValidation);
  auto negative = SmallSpec();
  negative.schools[0].capacity[0].second = -1;
  EXPECT_EQ(CodeOf([&] { validate_instance(negative); }), ErrorCode::kValidation);
}

TEST(InstanceTest, CheckMatchingRejectsOverfullAndInfeasible) {
  const Instance inst = validate_instance(SmallSpec());
  EXPECT_NO_THROW(check_matching(inst, {1, 0, kUnassigned}));
  // Two level-1 students at c1, one seat.
  EXPECT_EQ(CodeOf([&] { check_matching(inst, {0, kUnassigned, 0}); }),
            ErrorCode::kInvalidMatching);
  EXPECT_FALSE(is_valid_matching(inst, {kUnassigned, 1, kUnassigned}));
  EXPECT_FALSE(is_valid_matching(inst, {1, 0}));
}

TEST(InstanceTest, RankObjectiveOnExampleOne) {
  const Fixture fx = fixture("example1");
  // Four students at their only choice, three unassigned at rank 2.
  EXPECT_EQ(rank_objective(fx.instance, fx.matching("mu")), 4 * 1 + 3 * 2);
}

TEST(InstanceTest, WithPrefsReplacesOneList) {
  const Instance inst = validate_instance(SmallSpec());
  const Instance other = inst.with_prefs(2, {1, 0});
  EXPECT_EQ(other.student(2).prefs, (std::vector<SchoolIdx>{1, 0}));
  EXPECT_EQ(other.student(0).prefs, inst.student(0).prefs);
  EXPECT_EQ(other.rank(2, 0), 2);
}

TEST(InstanceTest, UnlistedPairsFallToLastGroup) {
  auto spec = SmallSpec();
  spec.groups = {{"c", "c1", 1}};
  spec.num_groups = 2;
  const Instance inst = validate_instance(spec);
  EXPECT_EQ(inst.num_groups(), 2);
  EXPECT_EQ(inst.group(2, 0), 1);
  EXPECT_EQ(inst.group(0, 0), 2);
}

TEST(InstanceTest, SpecRoundTrip) {
  const Instance inst = validate_instance(SmallSpec());
  const Instance again = validate_instance(inst.to_spec());
  EXPECT_EQ(again.num_students(), inst.num_students());
  for (int s = 0; s < inst.num_students(); ++s) {
    EXPECT_EQ(again.student(s).prefs, inst.student(s).prefs);
    EXPECT_EQ(again.student(s).level, inst.student(s).level);
  }
}

}  // namespace
}  // namespace sibmatch
