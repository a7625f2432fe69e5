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

#ifndef SIBMATCH_MECHANISMS_H_
#define SIBMATCH_MECHANISMS_H_

#include <vector>

#include "sibmatch/instance.h"
#include "sibmatch/lottery.h"

namespace sibmatch {

// Dense g(s,c) table (row-major by student) with its number of groups.
struct GroupMap {
  std::vector<int> g;
  int num_groups = 1;
};

struct GroupEntry {
  StudentIdx student;
  SchoolIdx school;
  int g;
};

struct LevelTrace {
  LevelIdx level;
  int rounds;
  int num_groups;
  // Pairs of this level's students whose group differs from num_groups.
  std::vector<GroupEntry> groups;
};

struct MechanismResult {
  Matching matching;
  std::vector<LevelTrace> per_level_trace;  // in processing order
};

// Student-proposing deferred acceptance run independently per level.
MechanismResult deferred_acceptance(const Instance& inst,
                                    const LotteryProfile& lot,
                                    const GroupMap* group_override = nullptr);

// Sequential per-level DA from the highest level down; a student whose
// sibling already holds a seat at c is moved just ahead of the no-priority
// group at c.
MechanismResult descending(const Instance& inst, const LotteryProfile& lot);
// Same, lowest level first.
MechanismResult ascending(const Instance& inst, const LotteryProfile& lot);

}  // namespace sibmatch

#endif  // SIBMATCH_MECHANISMS_H_
