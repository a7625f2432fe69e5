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

#ifndef SIBMATCH_MILP_LP_FORMAT_H_
#define SIBMATCH_MILP_LP_FORMAT_H_

#include <string>

#include "sibmatch/milp/model.h"

namespace sibmatch::milp {

// CPLEX LP text.
std::string to_lp_string(const MilpModel& model);
void export_lp(const MilpModel& model, const std::string& path);

// Parses "name value" lines ('#' starts a comment). Unlisted variables are 0.
// Throws IO_ERROR for unknown names or non-binary values and
// INFEASIBLE_IMPORT naming the first violated row.
Solution parse_solution(const MilpModel& model, const std::string& text);
Solution import_solution(const MilpModel& model, const std::string& path);

}  // namespace sibmatch::milp

#endif  // SIBMATCH_MILP_LP_FORMAT_H_
