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


#ifndef SIBMATCH_EXPERIMENTS_METRICS_H_
#define SIBMATCH_EXPERIMENTS_METRICS_H_

#include <cstdint>
#include <vector>

#include "sibmatch/instance.h"

namespace sibmatch {

// Student counts. The separated_* counters count a student once per
// category when some sibling sharing a listed school meets the condition,
// so members of larger families may appear in several categories.
struct OutcomeMetrics {
  std::int64_t top_pref = 0;
  std::int64_t unassigned = 0;
  std::int64_t together = 0;
  std::int64_t separated_none = 0;
  std::int64_t separated_one = 0;
  std::int64_t separated_both = 0;
  // rank_histogram[k] counts students assigned to their (k+1)-th choice.
  std::vector<std::int64_t> rank_histogram;
};

OutcomeMetrics metrics(const Instance& inst, const Matching& mu);

}  // namespace sibmatch

#endif  // SIBMATCH_EXPERIMENTS_METRICS_H_
