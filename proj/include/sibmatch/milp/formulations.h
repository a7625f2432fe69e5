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

#ifndef SIBMATCH_MILP_FORMULATIONS_H_
#define SIBMATCH_MILP_FORMULATIONS_H_

#include <cstdint>

#include "sibmatch/instance.h"
#include "sibmatch/lottery.h"
#include "sibmatch/milp/model.h"

namespace sibmatch::milp {

// Assignment and capacity rows plus the initial-stability cuts; minimizes the
// sum of ranks.
MilpModel build_baseline(const Instance& inst, const LotteryProfile& lot);

// Adds z variables and the provider rows.
void build_provider_region(const Instance& inst, const LotteryProfile& lot,
                           MilpModel& model);
// Adds y variables and the receiver rows. Needs the provider region.
void build_receiver_region(const Instance& inst, MilpModel& model);

MilpModel build_absolute(const Instance& inst, const LotteryProfile& lot,
                         bool hard);
MilpModel build_partial(const Instance& inst, const LotteryProfile& lot,
                        bool hard);

// Sum of all z at least zeta.
void add_min_providers(MilpModel& model, std::int64_t zeta);

// Initial stability while maximizing co-assigned family members.
MilpModel build_fosm(const Instance& inst, const LotteryProfile& lot);

// Absolute priorities on top of static groups. When there are two or more
// groups, group 1 holds secured enrollment: each student may hold it at one
// listed school, and seats must cover the secured students.
MilpModel build_absolute_static(const Instance& inst,
                                const LotteryProfile& lot, bool hard);

// Rewrites z/y so each flagged family uses its lowest-key candidate; x is
// untouched. Throws INFEASIBLE_INPUT for an infeasible point.
Solution normalize_providers(const Instance& inst, const LotteryProfile& lot,
                             const MilpModel& model, const Solution& solution);

// Point encoding a matching with z = y = 0 (t set consistently).
std::vector<char> encode_matching(const MilpModel& model, const Matching& mu);

}  // namespace sibmatch::milp

#endif  // SIBMATCH_MILP_FORMULATIONS_H_
