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

#ifndef SIBMATCH_ORACLE_H_
#define SIBMATCH_ORACLE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sibmatch/instance.h"
#include "sibmatch/lottery.h"
#include "sibmatch/stability.h"

namespace sibmatch {

enum class StableKind {
  kInitial,
  kAbsoluteHard,
  kAbsoluteSoft,
  kPartialHard,
  kPartialSoft
};

const char* StableKindName(StableKind kind);
std::optional<StableKind> ParseStableKind(const std::string& name);

struct OracleConfig {
  double search_bound = 1e7;  // on prod(|feasible prefs| + 1)
  int candidate_bound = 20;
};

// Visits every capacity-feasible matching exactly once. Students are taken in
// id order, options in preference order then unassigned. Stops early when the
// visitor returns false. Throws SEARCH_TOO_LARGE above the bound.
void enumerate_matchings(const Instance& inst,
                         const std::function<bool(const Matching&)>& visit,
                         const OracleConfig& config = {});

std::int64_t count_matchings(const Instance& inst,
                             const OracleConfig& config = {});

struct StableMember {
  Matching matching;
  ProviderSelection z;  // forced (hard) or witness (soft); empty for initial
  std::int64_t objective = 0;
};

struct StableSet {
  StableKind kind = StableKind::kInitial;
  std::vector<StableMember> members;  // enumeration order
};

StableSet stable_set(const Instance& inst, const LotteryProfile& lot,
                     StableKind kind, const OracleConfig& config = {});

// Minimum sum of ranks; ties go to the lexicographically smallest
// serialization (school ids in student id order).
std::optional<StableMember> rank_optimal(const StableSet& set,
                                         const Instance& inst);

// "c1,-,c3" style key in student id order; "-" is unassigned.
std::string matching_signature(const Instance& inst, const Matching& mu);

}  // namespace sibmatch

#endif  // SIBMATCH_ORACLE_H_
