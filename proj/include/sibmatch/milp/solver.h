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

#ifndef SIBMATCH_MILP_SOLVER_H_
#define SIBMATCH_MILP_SOLVER_H_

#include <cstdint>
#include <vector>

#include "sibmatch/instance.h"
#include "sibmatch/milp/model.h"

namespace sibmatch::milp {

struct SolverConfig {
  double gap = 0.001;  // relative
  std::int64_t node_limit = 50'000'000;
  double time_limit_seconds = 600.0;
  int max_vars = 50'000;
};

// Depth-first branch and bound over binaries with exact integer propagation.
Solution solve(const MilpModel& model, const SolverConfig& config = {});

// Distinct matchings among the feasible points, found by re-solving with a
// no-good cut on the x variables after each hit.
std::vector<Matching> enumerate_matchings_milp(MilpModel model,
                                               int num_students,
                                               const SolverConfig& config = {});

}  // namespace sibmatch::milp

#endif  // SIBMATCH_MILP_SOLVER_H_
