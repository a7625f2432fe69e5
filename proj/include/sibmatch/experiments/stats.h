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


#ifndef SIBMATCH_EXPERIMENTS_STATS_H_
#define SIBMATCH_EXPERIMENTS_STATS_H_

#include <vector>

namespace sibmatch {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample std (n-1) over sqrt(n); 0 when n < 2
  int n = 0;
};

MeanSe mean_se(const std::vector<double>& xs);

struct SignTest {
  int positive = 0;
  int negative = 0;
  int ties = 0;
  // P(X >= positive) for X ~ Binomial(positive + negative, 1/2).
  double p_value = 1.0;
};

// One-sided test of "a tends to exceed b" on paired samples.
SignTest sign_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sibmatch

#endif  // SIBMATCH_EXPERIMENTS_STATS_H_
