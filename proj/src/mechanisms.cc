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

#include "sibmatch/mechanisms.h"

#include <algorithm>
#include <numeric>

namespace sibmatch {

namespace {

// Runs synchronous-round DA for the students of level l and writes their
// assignments into mu. Returns the number of proposal rounds.
int RunLevel(const Instance& inst, const InitialOrder& order, LevelIdx l,
             Matching& mu) {
  const auto& students = inst.students_at_level(l);
  std::vector<size_t> next(inst.num_students(), 0);
  std::vector<std::vector<StudentIdx>> held(inst.num_schools());
  std::vector<StudentIdx> free_list(students.begin(), students.end());
  for (StudentIdx s : students) mu[s] = kUnassigned;
  int rounds = 0;
  while (true) {
    std::vector<std::vector<StudentIdx>> proposals(inst.num_schools());
    bool any = false;
    for (StudentIdx s : free_list) {
      const auto& prefs = inst.student(s).prefs;
      while (next[s] < prefs.size() &&
             inst.capacity(prefs[next[s]], l) == 0) {
        ++next[s];
      }
      if (next[s] < prefs.size()) {
        proposals[prefs[next[s]++]].push_back(s);
        any = true;
      }
    }
    if (!any) break;
    ++rounds;
    free_list.clear();
    for (int c = 0; c < inst.num_schools(); ++c) {
      if (proposals[c].empty()) continue;
      auto& h = held[c];
      h.insert(h.end(), proposals[c].begin(), proposals[c].end());
      std::sort(h.begin(), h.end(), [&](StudentIdx a, StudentIdx b) {
        return order.position(c, a) < order.position(c, b);
      });
      const size_t q = static_cast<size_t>(inst.capacity(c, l));
      while (h.size() > q) {
        free_list.push_back(h.back());
        h.pop_back();
      }
    }
    std::sort(free_list.begin(), free_list.end());
  }
  for (int c = 0; c < inst.num_schools(); ++c) {
    for (StudentIdx s : held[c]) mu[s] = c;
  }
  return rounds;
}

LevelTrace MakeTrace(const Instance& inst, LevelIdx l, int rounds) {
  LevelTrace t{l, rounds, inst.num_groups(), {}};
  for (StudentIdx s : inst.students_at_level(l)) {
    for (int c = 0; c < inst.num_schools(); ++c) {
      if (inst.group(s, c) != inst.num_groups()) {
        t.groups.push_back({s, c, inst.group(s, c)});
      }
    }
  }
  return t;
}

MechanismResult Sequential(const Instance& inst, const LotteryProfile& lot,
                           bool high_to_low) {
  std::vector<LevelIdx> levels(inst.num_levels());
  std::iota(levels.begin(), levels.end(), 0);
  if (high_to_low) std::reverse(levels.begin(), levels.end());

  MechanismResult res{Matching(inst.num_students(), kUnassigned), {}};
  const int G = inst.num_groups();
  const int nc = inst.num_schools();
  std::vector<char> processed(inst.num_students(), 0);
  for (LevelIdx l : levels) {
    // Static groups below G keep their value; boosted pairs take G and the
    // remaining pairs drop to G+1.
    std::vector<int> g(static_cast<size_t>(inst.num_students()) * nc);
    for (int s = 0; s < inst.num_students(); ++s) {
      for (int c = 0; c < nc; ++c) {
        const int base = inst.group(s, c);
        g[static_cast<size_t>(s) * nc + c] = base < G ? base : G + 1;
      }
    }
    for (StudentIdx s : inst.students_at_level(l)) {
      for (StudentIdx sib : inst.family_of(s)) {
        if (sib == s || !processed[sib]) continue;
        const SchoolIdx c = res.matching[sib];
        if (c == kUnassigned || !inst.feasible(s, c)) continue;
        int& cell = g[static_cast<size_t>(s) * nc + c];
        if (cell == G + 1) cell = G;
      }
    }
    const Instance boosted = inst.with_groups(std::move(g), G + 1);
    const InitialOrder order(boosted, lot);
    const int rounds = RunLevel(boosted, order, l, res.matching);
    res.per_level_trace.push_back(MakeTrace(boosted, l, rounds));
    for (StudentIdx s : inst.students_at_level(l)) processed[s] = 1;
  }
  return res;
}

}  // namespace

MechanismResult deferred_acceptance(const Instance& inst,
                                    const LotteryProfile& lot,
                                    const GroupMap* group_override) {
  const Instance effective =
      group_override == nullptr
          ? inst
          : inst.with_groups(group_override->g, group_override->num_groups);
  const InitialOrder order(effective, lot);
  MechanismResult res{Matching(inst.num_students(), kUnassigned), {}};
  for (LevelIdx l = 0; l < inst.num_levels(); ++l) {
    const int rounds = RunLevel(effective, order, l, res.matching);
    res.per_level_trace.push_back(MakeTrace(effective, l, rounds));
  }
  return res;
}

MechanismResult descending(const Instance& inst, const LotteryProfile& lot) {
  return Sequential(inst, lot, /*high_to_low=*/true);
}

MechanismResult ascending(const Instance& inst, const LotteryProfile& lot) {
  return Sequential(inst, lot, /*high_to_low=*/false);
}

}  // namespace sibmatch
