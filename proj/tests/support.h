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


#ifndef SIBMATCH_TESTS_SUPPORT_H_
#define SIBMATCH_TESTS_SUPPORT_H_

#include <cstdint>
#include <random>

#include "sibmatch/instance.h"
#include "sibmatch/lottery.h"
#include "sibmatch/stability.h"

namespace sibmatch::testing {

struct TinyConfig {
  int min_students = 5;
  int max_students = 8;
  int num_schools = 3;
  int num_levels = 2;
  int max_capacity = 2;
  double seat_scale = 1.0;  // expected seats per student and level, before rounding
  double popularity_skew = 0.3;  // school c drawn with weight (c+1)^-skew
  double sibling_prob = 0.45;  // chance a student joins the previous family
  bool distinct_levels = false;  // no two siblings share a level
};

// Random small instance; families of up to three members.
Instance tiny_instance(std::mt19937_64& rng, const TinyConfig& cfg = {});

// Uniformly random valid matching: each student picks a feasible option
// (or none) and over-full seats are undone.
Matching random_matching(const Instance& inst, std::mt19937_64& rng);

// Straight-from-the-definition provider candidate test.
bool direct_candidate(const Instance& inst, const LotteryProfile& lot,
                      const Matching& mu, StudentIdx s);

// Every family with a member at c and a sibling matched weakly worse than
// c (and able to attend c) has a provider candidate at c.
bool direct_provider_existence(const Instance& inst, const LotteryProfile& lot,
                               const Matching& mu);

}  // namespace sibmatch::testing

#endif  // SIBMATCH_TESTS_SUPPORT_H_
