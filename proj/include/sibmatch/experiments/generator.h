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


#ifndef SIBMATCH_EXPERIMENTS_GENERATOR_H_
#define SIBMATCH_EXPERIMENTS_GENERATOR_H_

#include <cstdint>
#include <vector>

#include "sibmatch/instance.h"
#include "sibmatch/io.h"

namespace sibmatch {

struct GeneratorConfig {
  int num_students = 200;
  // Share of students living in families of size 1, 2 and 3.
  std::vector<double> family_share = {0.75, 0.20, 0.05};
  // Relative weight of each level; its size is the level count.
  std::vector<double> level_weights = {1.0, 1.0, 1.0};
  int num_schools = 20;
  // Seats per level as a multiple of the students applying to it.
  double capacity_scale = 1.0;
  // list_length_weights[k] is the weight of lists with k+1 schools.
  std::vector<double> list_length_weights = {1, 1, 1, 1, 1, 1, 1, 1};
  // School j of the popularity ranking has weight (j+1)^-skew.
  double popularity_skew = 0.8;
  // Probability that a sibling copies each entry of the first member's list.
  double sibling_overlap = 0.8;
  std::uint64_t seed = 1;
};

// Throws VALIDATION_ERROR.
void validate_generator_config(const GeneratorConfig& config);

Instance generate(const GeneratorConfig& config);

GeneratorConfig generator_config_from_json(const Json& doc);
Json generator_config_to_json(const GeneratorConfig& config);

}  // namespace sibmatch

#endif  // SIBMATCH_EXPERIMENTS_GENERATOR_H_
