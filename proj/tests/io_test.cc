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
#include "sibmatch/io.h"

namespace sibmatch {
namespace {

TEST(IoTest, InstanceJsonRoundTrip) {
  const Fixture fx = fixture("prop1-absolute-nonexistence");
  const Json doc = instance_to_json(fx.instance);
  const Instance again = validate_instance(instance_spec_from_json(doc));
  EXPECT_EQ(instance_to_json(again), doc);
  EXPECT_EQ(again.capacity(again.school_index("c1"), 0), 0);
}

TEST(IoTest, InstanceFromCsv) {
  const std::string students =
      "id,family,level,pref1,pref2\n"
      "a,f,l1,c1,c2\n"
      "b,f,l2,c2,\n"
      "c,g,l1,c1,\n";
  const std::string schools =
      "id,level,capacity\n"
      "c1,l1,1\n"
      "c1,l2,0\n"
      "c2,l1,1\n"
      "c2,l2,1\n";
  const Instance inst = validate_instance(instance_spec_from_csv(students, schools));
  EXPECT_EQ(inst.num_students(), 3);
  EXPECT_EQ(inst.num_families(), 2);
  EXPECT_EQ(inst.student(1).prefs, (std::vector<SchoolIdx>{1}));
  EXPECT_EQ(inst.capacity(0, 1), 0);
}

TEST(IoTest, BadJsonIsValidationError) {
  try {
    instance_spec_from_json(Json::array());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
}

TEST(IoTest, LotteryCsvRoundTrip) {
  const Fixture fx = fixture("appendixE-provider");
  const std::string text = lotteries_to_csv(fx.instance, fx.lottery);
  const LotteryProfile back = lotteries_from_csv(fx.instance, text);
  for (int s = 0; s < fx.instance.num_students(); ++s) {
    for (int c = 0; c < fx.instance.num_schools(); ++c)
      EXPECT_EQ(back.key(s, c), fx.lottery.key(s, c));
  }
}

TEST(IoTest, MatchingJsonKeepsProviders) {
  const Fixture fx = fixture("example1");
  const Instance& I = fx.instance;
  const Matching& mu = fx.matching("mu_double_prime");
  const PairList z = {{I.student_index("f1"), 0}};
  const Json doc = matching_to_json(I, mu, &z);
  PairList back_z;
  EXPECT_EQ(matching_from_json(I, doc, &back_z), mu);
  EXPECT_EQ(back_z, z);
}

TEST(IoTest, MatchingCsvListsEveryStudent) {
  const Fixture fx = fixture("example1");
  const std::string csv = matching_to_csv(fx.instance, fx.matching("mu"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "student,school");
  EXPECT_NE(csv.find("f1,c\n"), std::string::npos);
  EXPECT_NE(csv.find("f2,\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8);
}

TEST(IoTest, SplitCsvLineHandlesQuotes) {
  EXPECT_EQ(split_csv_line("a,\"b,c\",d"), (std::vector<std::string>{"a", "b,c", "d"}));
  EXPECT_EQ(split_csv_line("\"x\"\"y\",z"), (std::vector<std::string>{"x\"y", "z"}));
  EXPECT_EQ(split_csv_line("a,,"), (std::vector<std::string>{"a", "", ""}));
}

TEST(IoTest, MissingFileIsIoError) {
  try {
    read_file("/nonexistent/sibmatch.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace sibmatch
