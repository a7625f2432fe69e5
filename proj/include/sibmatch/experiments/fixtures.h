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


#ifndef SIBMATCH_EXPERIMENTS_FIXTURES_H_
#define SIBMATCH_EXPERIMENTS_FIXTURES_H_

#include <string>
#include <utility>
#include <vector>

#include "sibmatch/instance.h"
#include "sibmatch/lottery.h"

namespace sibmatch {

// A hand-built instance with a fixed lottery and named reference matchings.
// Variants share students and schools with the base instance and differ
// only in some preference lists, so the same lottery applies.
struct Fixture {
  std::string name;
  std::string description;
  Instance instance;
  LotteryProfile lottery;
  std::vector<std::pair<std::string, Matching>> matchings;
  std::vector<std::pair<std::string, Instance>> variants;

  // Throw UNKNOWN_FIXTURE when the name is absent.
  const Matching& matching(const std::string& key) const;
  const Instance& variant(const std::string& key) const;
};

std::vector<std::string> fixture_names();
Fixture fixture(const std::string& name);

}  // namespace sibmatch

#endif  // SIBMATCH_EXPERIMENTS_FIXTURES_H_
