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


#include "sibmatch/experiments/fixtures.h"

#include <functional>
#include <initializer_list>
#include <map>

#include "sibmatch/error.h"

namespace sibmatch {
namespace {

using Names = std::vector<std::string>;

class Spec {
 public:
  explicit Spec(Names levels) { spec_.levels = std::move(levels); }

  Spec& school(const std::string& id, std::vector<std::int64_t> caps) {
    SchoolSpec c;
    c.id = id;
    for (size_t l = 0; l < caps.size(); ++l)
      c.capacity.emplace_back(spec_.levels[l], caps[l]);
    spec_.schools.push_back(std::move(c));
    return *this;
  }

  Spec& student(const std::string& id, const std::string& family,
                const std::string& level, Names prefs) {
    spec_.students.push_back({id, family, level, std::move(prefs)});
    return *this;
  }

  Instance build() const { return validate_instance(spec_); }

 private:
  InstanceSpec spec_;
};

std::vector<StudentIdx> Indices(const Instance& inst, const Names& ids) {
  std::vector<StudentIdx> out;
  for (const auto& id : ids) out.push_back(inst.student_index(id));
  return out;
}

std::vector<SchoolIdx> SchoolIndices(const Instance& inst, const Names& ids) {
  std::vector<SchoolIdx> out;
  for (const auto& id : ids) out.push_back(inst.school_index(id));
  return out;
}

// Students left out are unassigned.
Matching MatchOf(
    const Instance& inst,
    std::initializer_list<std::pair<const char*, const char*>> pairs) {
  Matching mu(inst.num_students(), kUnassigned);
  for (const auto& [s, c] : pairs) mu[inst.student_index(s)] = inst.school_index(c);
  return mu;
}

Fixture Example1() {
  Fixture fx;
  fx.description = "one school with four seats, two sibling pairs";
  Spec spec({"l1"});
  spec.school("c", {4});
  for (const char* s : {"s1", "s2", "s3"}) spec.student(s, s, "l1", {"c"});
  spec.student("f1", "f", "l1", {"c"}).student("f2", "f", "l1", {"c"});
  spec.student("f1p", "fp", "l1", {"c"}).student("f2p", "fp", "l1", {"c"});
  fx.instance = spec.build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(
      I, Indices(I, {"s1", "s2", "s3", "f1", "f1p", "f2", "f2p"}));
  fx.matchings = {
      {"mu", MatchOf(I, {{"s1", "c"}, {"s2", "c"}, {"s3", "c"}, {"f1", "c"}})},
      {"mu_prime",
       MatchOf(I, {{"f1", "c"}, {"f2", "c"}, {"f1p", "c"}, {"f2p", "c"}})},
      {"mu_double_prime",
       MatchOf(I, {{"s1", "c"}, {"s2", "c"}, {"f1", "c"}, {"f2", "c"}})},
  };
  return fx;
}

Spec Prop1Spec() {
  Spec spec({"l1", "l2"});
  spec.school("c1", {0, 1}).school("c2", {1, 1}).school("c3", {1, 0});
  spec.school("c4", {1, 1});
  spec.student("a1", "a", "l1", {"c3", "c4"});
  spec.student("a2", "a", "l2", {"c3", "c4"});
  spec.student("x1", "x", "l1", {"c2"});
  spec.student("d1", "d", "l1", {"c1", "c2", "c3"});
  spec.student("d2", "d", "l2", {"c1", "c2", "c3"});
  spec.student("y2", "y", "l2", {"c4", "c1"});
  return spec;
}

const Names kProp1Order = {"y2", "x1", "d1", "d2", "a1", "a2"};

Fixture Prop1() {
  Fixture fx;
  fx.description = "no stable matching under hard absolute priorities";
  fx.instance = Prop1Spec().build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(I, Indices(I, kProp1Order));
  fx.matchings = {{"mu", MatchOf(I, {{"a1", "c4"},
                                     {"x1", "c2"},
                                     {"d1", "c3"},
                                     {"d2", "c1"},
                                     {"y2", "c4"}})}};
  return fx;
}

Fixture Prop1PlusChat() {
  Fixture fx;
  fx.description = "extra level-2 school restores existence";
  Spec spec({"l1", "l2"});
  spec.school("c1", {0, 1}).school("c2", {1, 1}).school("c3", {1, 0});
  spec.school("c4", {1, 1}).school("chat", {0, 1});
  spec.student("a1", "a", "l1", {"c3", "c4"});
  spec.student("a2", "a", "l2", {"c3", "c4"});
  spec.student("x1", "x", "l1", {"c2"});
  spec.student("d1", "d", "l1", {"chat", "c1", "c2", "c3"});
  spec.student("d2", "d", "l2", {"chat", "c1", "c2", "c3"});
  spec.student("y2", "y", "l2", {"c4", "c1"});
  fx.instance = spec.build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(I, Indices(I, kProp1Order));
  fx.matchings = {{"remark", MatchOf(I, {{"d2", "chat"},
                                         {"y2", "c1"},
                                         {"x1", "c2"},
                                         {"d1", "c3"},
                                         {"a1", "c4"},
                                         {"a2", "c4"}})}};
  return fx;
}

Fixture Prop2() {
  Fixture fx;
  fx.description = "no stable matching under hard partial priorities with "
                   "individual lotteries";
  Spec spec({"l1", "l2"});
  spec.school("c1", {1, 1}).school("c2", {2, 0}).school("c3", {1, 0});
  spec.school("c4", {2, 0});
  spec.student("a1", "a", "l1", {"c3", "c4"});
  spec.student("a1p", "a", "l1", {"c3", "c4"});
  spec.student("x1", "x", "l1", {"c2"});
  spec.student("e1", "e", "l1", {"c2"});
  spec.student("d1", "d", "l1", {"c1", "c2", "c3"});
  spec.student("d1p", "d", "l1", {"c1", "c2", "c3"});
  spec.student("h1", "h", "l1", {"c4", "c1"});
  spec.student("h2", "h", "l2", {"c4", "c1"});
  fx.instance = spec.build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(
      I, Indices(I, {"h2", "d1", "x1", "e1", "d1p", "a1", "h1", "a1p"}));
  fx.matchings = {{"mu", MatchOf(I, {{"a1", "c4"},
                                     {"x1", "c2"},
                                     {"e1", "c2"},
                                     {"d1", "c1"},
                                     {"d1p", "c3"},
                                     {"h1", "c4"},
                                     {"h2", "c1"}})}};
  return fx;
}

Spec IncentivesSpec() {
  Spec spec({"l1", "l2"});
  spec.school("c1", {1, 1}).school("c2", {0, 1}).school("c3", {1, 0});
  spec.school("c4", {1, 1});
  spec.student("s1", "s1", "l1", {"c1", "c2"});
  spec.student("s2", "s2", "l2", {"c4", "c1"});
  spec.student("f1", "f", "l1", {"c1", "c3"});
  spec.student("f2", "f", "l2", {"c1", "c2"});
  spec.student("f1p", "fp", "l1", {"c3", "c4"});
  spec.student("f2p", "fp", "l2", {"c3", "c4"});
  return spec;
}

Matching IncentivesTruthful(const Instance& I) {
  return MatchOf(I, {{"f1", "c1"}, {"f1p", "c3"}, {"s2", "c4"}, {"f2", "c1"}});
}

Fixture Prop3() {
  Fixture fx;
  fx.description = "profitable misreport under hard absolute priorities";
  fx.instance = IncentivesSpec().build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(
      I, Indices(I, {"s2", "s1", "f1", "f2", "f1p", "f2p"}));
  StudentIdx f2p = I.student_index("f2p");
  fx.variants = {
      {"misreport", I.with_prefs(f2p, SchoolIndices(I, {"c4", "c3", "c1"}))}};
  fx.matchings = {
      {"mu", IncentivesTruthful(I)},
      {"mu_prime", MatchOf(I, {{"s1", "c1"},
                               {"f1", "c3"},
                               {"f1p", "c4"},
                               {"s2", "c1"},
                               {"f2", "c2"},
                               {"f2p", "c4"}})},
  };
  return fx;
}

Fixture Prop4() {
  Fixture fx;
  fx.description = "profitable misreport under hard partial priorities with "
                   "individual lotteries";
  fx.instance = IncentivesSpec().build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(
      I, Indices(I, {"f2", "s1", "f1", "f1p", "s2", "f2p"}));
  StudentIdx f2p = I.student_index("f2p");
  fx.variants = {
      {"misreport", I.with_prefs(f2p, SchoolIndices(I, {"c4", "c1", "c3"}))}};
  fx.matchings = {
      {"mu", IncentivesTruthful(I)},
      {"mu_prime", MatchOf(I, {{"s1", "c1"},
                               {"f1", "c3"},
                               {"f1p", "c4"},
                               {"s2", "c1"},
                               {"f2", "c2"},
                               {"f2p", "c4"}})},
  };
  return fx;
}

Fixture NonUniqueness() {
  Fixture fx;
  fx.description = "two stable matchings with different cardinalities";
  Spec spec({"l1", "l2", "l3"});
  spec.school("c1", {1, 1, 1}).school("c2", {0, 0, 2});
  spec.student("s", "s", "l3", {"c1", "c2"});
  spec.student("sp", "sp", "l3", {"c1", "c2"});
  spec.student("f1", "f", "l1", {"c1"});
  spec.student("f2", "f", "l2", {"c1"});
  spec.student("f1p", "fp", "l1", {"c1"});
  spec.student("f2p", "fp", "l2", {"c1"});
  spec.student("f3p", "fp", "l3", {"c1"});
  fx.instance = spec.build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(
      I, Indices(I, {"s", "sp", "f1", "f2p", "f2", "f1p", "f3p"}));
  fx.matchings = {
      {"mu",
       MatchOf(I, {{"f1", "c1"}, {"f2", "c1"}, {"s", "c1"}, {"sp", "c2"}})},
      {"mu_prime", MatchOf(I, {{"f1p", "c1"},
                               {"f2p", "c1"},
                               {"f3p", "c1"},
                               {"s", "c2"},
                               {"sp", "c2"}})},
  };
  return fx;
}

Fixture Provider() {
  Fixture fx;
  fx.description = "contingent priority reaches pairs outside every "
                   "initially stable matching";
  Spec spec({"l1", "l2"});
  spec.school("c1", {1, 1}).school("c2", {1, 1});
  spec.student("f1", "f", "l1", {"c1", "c2"});
  spec.student("f2", "f", "l2", {"c1", "c2"});
  spec.student("f1p", "fp", "l1", {"c2", "c1"});
  spec.student("f2p", "fp", "l2", {"c2", "c1"});
  spec.student("s1", "s1", "l1", {"c2", "c1"});
  spec.student("s2", "s2", "l2", {"c1", "c2"});
  fx.instance = spec.build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromSchoolRankings(
      I, {Indices(I, {"s2", "f2", "f2p", "f1", "f1p", "s1"}),
          Indices(I, {"f2", "f2p", "s2", "s1", "f1p", "f1"})});
  fx.matchings = {
      {"mu",
       MatchOf(I, {{"s2", "c1"}, {"f2", "c2"}, {"f1", "c1"}, {"s1", "c2"}})},
      {"mu_prime",
       MatchOf(I, {{"f1", "c1"}, {"f2", "c1"}, {"f1p", "c2"}, {"f2p", "c2"}})},
  };
  return fx;
}

Fixture NoUniqueOrder() {
  Fixture fx;
  fx.description = "priority order depends on the matching";
  Spec spec({"l1", "l2"});
  spec.school("c", {1, 1});
  spec.student("f1", "f", "l1", {"c"}).student("f2", "f", "l2", {"c"});
  spec.student("f1p", "fp", "l1", {"c"}).student("f2p", "fp", "l2", {"c"});
  fx.instance = spec.build();
  const Instance& I = fx.instance;
  fx.lottery = LotteryProfile::FromRanking(
      I, Indices(I, {"f1", "f2p", "f1p", "f2"}));
  fx.matchings = {
      {"mu", MatchOf(I, {{"f1", "c"}, {"f2", "c"}})},
      {"mu_prime", MatchOf(I, {{"f1p", "c"}, {"f2p", "c"}})},
  };
  return fx;
}

Fixture OrderMatters() {
  Fixture fx;
  fx.description = "level processing order changes the outcome";
  Spec spec({"l1", "l2"});
  spec.school("c1", {1, 1}).school("c2", {1, 1});
  spec.student("f1", "f", "l1", {"c2", "c1"});
  spec.student("f2", "f", "l2", {"c1", "c2"});
  spec.student("a1", "a1", "l1", {"c2", "c1"});
  spec.student("b2", "b2", "l2", {"c1", "c2"});
  fx.instance = spec.build();
  const Instance& I = fx.instance;
  fx.lottery =
      LotteryProfile::FromRanking(I, Indices(I, {"a1", "f1", "b2", "f2"}));
  fx.matchings = {
      {"descending",
       MatchOf(I, {{"f1", "c2"}, {"a1", "c1"}, {"f2", "c2"}, {"b2", "c1"}})},
      {"ascending",
       MatchOf(I, {{"f1", "c1"}, {"a1", "c2"}, {"f2", "c1"}, {"b2", "c2"}})},
  };
  return fx;
}

const std::map<std::string, std::function<Fixture()>>& Registry() {
  static const std::map<std::string, std::function<Fixture()>> registry = {
      {"example1", Example1},
      {"prop1-absolute-nonexistence", Prop1},
      {"prop1-plus-chat", Prop1PlusChat},
      {"prop2-partial-individual", Prop2},
      {"prop3-incentives", Prop3},
      {"prop4-incentives-partial", Prop4},
      {"appendixE-non-uniqueness", NonUniqueness},
      {"appendixE-provider", Provider},
      {"appendixE-no-unique-order", NoUniqueOrder},
      {"appendixF-order-matters", OrderMatters},
  };
  return registry;
}

template <typename T>
const T& Lookup(const std::vector<std::pair<std::string, T>>& items,
                const std::string& fixture, const std::string& key) {
  for (const auto& [k, v] : items)
    if (k == key) return v;
  throw Error(ErrorCode::kUnknownFixture,
              "fixture " + fixture + " has no entry " + key);
}

}  // namespace

const Matching& Fixture::matching(const std::string& key) const {
  return Lookup(matchings, name, key);
}

const Instance& Fixture::variant(const std::string& key) const {
  return Lookup(variants, name, key);
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : Registry()) names.push_back(name);
  return names;
}

Fixture fixture(const std::string& name) {
  auto it = Registry().find(name);
  if (it == Registry().end())
    throw Error(ErrorCode::kUnknownFixture, "unknown fixture: " + name);
  Fixture fx = it->second();
  fx.name = name;
  return fx;
}

}  // namespace sibmatch
