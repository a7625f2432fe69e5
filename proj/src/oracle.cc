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

#include "sibmatch/oracle.h"

#include <cctype>

#include "sibmatch/error.h"
#include "sibmatch/io.h"

namespace sibmatch {

const char* StableKindName(StableKind kind) {
  switch (kind) {
    case StableKind::kInitial:
      return "initial";
    case StableKind::kAbsoluteHard:
      return "absolute-hard";
    case StableKind::kAbsoluteSoft:
      return "absolute-soft";
    case StableKind::kPartialHard:
      return "partial-hard";
    case StableKind::kPartialSoft:
      return "partial-soft";
  }
  return "?";
}

std::optional<StableKind> ParseStableKind(const std::string& name) {
  for (StableKind k :
       {StableKind::kInitial, StableKind::kAbsoluteHard,
        StableKind::kAbsoluteSoft, StableKind::kPartialHard,
        StableKind::kPartialSoft}) {
    if (name == StableKindName(k)) return k;
  }
  return std::nullopt;
}

void enumerate_matchings(const Instance& inst,
                         const std::function<bool(const Matching&)>& visit,
                         const OracleConfig& config) {
  const std::vector<StudentIdx> order = students_by_id(inst);
  std::vector<std::vector<SchoolIdx>> options(inst.num_students());
  double space = 1;
  for (StudentIdx s : order) {
    options[s] = inst.feasible_schools(s);
    options[s].push_back(kUnassigned);
    space *= static_cast<double>(options[s].size());
  }
  if (space > config.search_bound) {
    throw Error(ErrorCode::kSearchTooLarge,
                "search space of " + std::to_string(space) +
                    " matchings exceeds the bound");
  }
  const int nl = inst.num_levels();
  std::vector<int> load(static_cast<size_t>(inst.num_schools()) * nl, 0);
  Matching mu(inst.num_students(), kUnassigned);
  bool stop = false;
  auto rec = [&](auto&& self, size_t i) -> void {
    if (stop) return;
    if (i == order.size()) {
      if (!visit(mu)) stop = true;
      return;
    }
    const StudentIdx s = order[i];
    const int l = inst.student(s).level;
    for (SchoolIdx c : options[s]) {
      if (c != kUnassigned) {
        int& ld = load[static_cast<size_t>(c) * nl + l];
        if (ld >= inst.capacity(c, l)) continue;
        ++ld;
        mu[s] = c;
        self(self, i + 1);
        --ld;
      } else {
        mu[s] = kUnassigned;
        self(self, i + 1);
      }
      if (stop) return;
    }
    mu[s] = kUnassigned;
  };
  rec(rec, 0);
}

std::int64_t count_matchings(const Instance& inst, const OracleConfig& config) {
  std::int64_t n = 0;
  enumerate_matchings(
      inst,
      [&](const Matching&) {
        ++n;
        return true;
      },
      config);
  return n;
}

StableSet stable_set(const Instance& inst, const LotteryProfile& lot,
                     StableKind kind, const OracleConfig& config) {
  StabilityChecker checker(inst, lot);
  StableSet out;
  out.kind = kind;
  enumerate_matchings(
      inst,
      [&](const Matching& mu) {
        // Every contingent notion requires non-wastefulness.
        if (!checker.non_wasteful(mu)) return true;
        StableMember m{mu, {}, 0};
        bool ok = false;
        switch (kind) {
          case StableKind::kInitial:
            ok = checker.initially_stable(mu);
            break;
          case StableKind::kAbsoluteHard:
          case StableKind::kPartialHard: {
            m.z = checker.hard_providers(mu);
            ok = checker.contingent_stable(
                mu, m.z,
                kind == StableKind::kAbsoluteHard ? PriorityKind::kAbsolute
                                                  : PriorityKind::kPartial);
            break;
          }
          case StableKind::kAbsoluteSoft:
          case StableKind::kPartialSoft:
            ok = checker.soft_stable(
                mu,
                kind == StableKind::kAbsoluteSoft ? PriorityKind::kAbsolute
                                                  : PriorityKind::kPartial,
                &m.z, config.candidate_bound);
            break;
        }
        if (ok) {
          m.objective = rank_objective(inst, mu);
          out.members.push_back(std::move(m));
        }
        return true;
      },
      config);
  return out;
}

std::string matching_signature(const Instance& inst, const Matching& mu) {
  std::string out;
  for (StudentIdx s : students_by_id(inst)) {
    if (!out.empty()) out += ",";
    out += mu[s] == kUnassigned ? std::string("-") : inst.school(mu[s]).id;
  }
  return out;
}

std::optional<StableMember> rank_optimal(const StableSet& set,
                                         const Instance& inst) {
  const StableMember* best = nullptr;
  std::string best_sig;
  for (const auto& m : set.members) {
    if (best == nullptr || m.objective < best->objective) {
      best = &m;
      best_sig = matching_signature(inst, m.matching);
    } else if (m.objective == best->objective) {
      std::string sig = matching_signature(inst, m.matching);
      if (sig < best_sig) {
        best = &m;
        best_sig = std::move(sig);
      }
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

}  // namespace sibmatch
