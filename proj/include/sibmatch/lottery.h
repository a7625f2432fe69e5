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

#ifndef SIBMATCH_LOTTERY_H_
#define SIBMATCH_LOTTERY_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sibmatch/instance.h"

namespace sibmatch {

// Tie-breaker of one student at one school. Lower is more favorable;
// compared lexicographically.
struct LotteryKey {
  double family_draw = 0.0;
  double member_draw = 0.0;

  auto operator<=>(const LotteryKey&) const = default;
};

enum class TieBreakingRule { kSTB, kMTB, kSTBF, kMTBF };

const char* RuleName(TieBreakingRule rule);
// Accepts "stb", "mtb", "stb-f", "mtb-f" (case-insensitive).
std::optional<TieBreakingRule> ParseRule(const std::string& name);
bool IsFamilyRule(TieBreakingRule rule);

class LotteryProfile {
 public:
  LotteryProfile() = default;
  LotteryProfile(int num_students, int num_schools);

  int num_students() const { return num_students_; }
  int num_schools() const { return num_schools_; }

  const LotteryKey& key(StudentIdx s, SchoolIdx c) const {
    return keys_[static_cast<size_t>(c) * num_students_ + s];
  }
  void set_key(StudentIdx s, SchoolIdx c, LotteryKey k) {
    keys_[static_cast<size_t>(c) * num_students_ + s] = k;
  }

  // Same strict order at every school: order[0] is the most favorable.
  static LotteryProfile FromRanking(const Instance& inst,
                                    const std::vector<StudentIdx>& order);
  // One strict order per school.
  static LotteryProfile FromSchoolRankings(
      const Instance& inst,
      const std::vector<std::vector<StudentIdx>>& orders);

  bool keys_distinct() const;

 private:
  int num_students_ = 0;
  int num_schools_ = 0;
  std::vector<LotteryKey> keys_;
};

// Uniform [0,1) draws from a seeded 64-bit Mersenne twister; the draw order
// is fixed so the profile is a pure function of (inst, rule, seed).
LotteryProfile draw_lotteries(const Instance& inst, TieBreakingRule rule,
                              std::uint64_t seed);

// Per-school initial priority positions: 0 is the highest priority.
class InitialOrder {
 public:
  InitialOrder(const Instance& inst, const LotteryProfile& lot);

  int position(SchoolIdx c, StudentIdx s) const {
    return pos_[static_cast<size_t>(c) * n_ + s];
  }
  // a has higher initial priority than b at c.
  bool higher(SchoolIdx c, StudentIdx a, StudentIdx b) const {
    return position(c, a) < position(c, b);
  }
  const std::vector<StudentIdx>& order(SchoolIdx c) const { return order_[c]; }

 private:
  int n_;
  std::vector<int> pos_;
  std::vector<std::vector<StudentIdx>> order_;
};

// Students of the whole market sorted by initial priority at c.
std::vector<StudentIdx> initial_order(const Instance& inst,
                                      const LotteryProfile& lot, SchoolIdx c);

}  // namespace sibmatch

#endif  // SIBMATCH_LOTTERY_H_
