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


#include "sibmatch/experiments/metrics.h"

namespace sibmatch {
namespace {

bool ShareListedSchool(const Instance& inst, StudentIdx a, StudentIdx b) {
  for (SchoolIdx c : inst.student(a).prefs)
    if (inst.listed(b, c)) return true;
  return false;
}

// Some school on both lists that matched student m ranks above its seat.
bool CommonBetterFor(const Instance& inst, StudentIdx m, StudentIdx other,
                     SchoolIdx seat) {
  for (SchoolIdx c : inst.student(m).prefs) {
    if (c == seat) return false;
    if (inst.listed(other, c)) return true;
  }
  return false;
}

}  // namespace

OutcomeMetrics metrics(const Instance& inst, const Matching& mu) {
  check_matching(inst, mu);
  OutcomeMetrics out;
  for (StudentIdx s = 0; s < inst.num_students(); ++s) {
    const SchoolIdx c = mu[s];
    if (c == kUnassigned) {
      ++out.unassigned;
    } else {
      size_t r = static_cast<size_t>(inst.pref_position(s, c));
      if (out.rank_histogram.size() < r) out.rank_histogram.resize(r, 0);
      ++out.rank_histogram[r - 1];
      if (r == 1) ++out.top_pref;
    }

    bool together = false, none = false, one = false, both = false;
    for (StudentIdx t : inst.family_of(s)) {
      if (t == s) continue;
      const SchoolIdx d = mu[t];
      if (c != kUnassigned && c == d) together = true;
      if (!ShareListedSchool(inst, s, t)) continue;
      if (c == kUnassigned && d == kUnassigned) {
        none = true;
      } else if (c == kUnassigned || d == kUnassigned) {
        StudentIdx m = c == kUnassigned ? t : s;
        StudentIdx u = c == kUnassigned ? s : t;
        if (CommonBetterFor(inst, m, u, mu[m])) one = true;
      } else if (c != d) {
        for (SchoolIdx e : inst.student(s).prefs) {
          if (e == c) break;
          if (e != d && inst.listed(t, e) && inst.prefers(t, e, d)) {
            both = true;
            break;
          }
        }
      }
    }
    out.together += together;
    out.separated_none += none;
    out.separated_one += one;
    out.separated_both += both;
  }
  return out;
}

}  // namespace sibmatch
