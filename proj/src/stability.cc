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

#include "sibmatch/stability.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "sibmatch/error.h"

namespace sibmatch {

const char* KindName(PriorityKind kind) {
  return kind == PriorityKind::kAbsolute ? "absolute" : "partial";
}

ContingentOrder::ContingentOrder(int num_students, int num_schools)
    : n_(num_students),
      keys_(static_cast<size_t>(num_students) * num_schools),
      own_(static_cast<size_t>(num_students) * num_schools) {}

std::vector<StudentIdx> ContingentOrder::order(SchoolIdx c) const {
  std::vector<StudentIdx> out(n_);
  std::iota(out.begin(), out.end(), 0);
  std::sort(out.begin(), out.end(), [&](StudentIdx a, StudentIdx b) {
    if (key(c, a) != key(c, b)) return key(c, a) < key(c, b);
    return a < b;
  });
  return out;
}

StabilityChecker::StabilityChecker(const Instance& inst,
                                   const LotteryProfile& lot)
    : inst_(inst), lot_(lot), init_(inst, lot) {}

bool StabilityChecker::non_wasteful(const Matching& mu) const {
  const int nl = inst_.num_levels();
  std::vector<int> load(static_cast<size_t>(inst_.num_schools()) * nl, 0);
  for (int s = 0; s < inst_.num_students(); ++s) {
    if (mu[s] != kUnassigned) {
      ++load[static_cast<size_t>(mu[s]) * nl + inst_.student(s).level];
    }
  }
  for (int s = 0; s < inst_.num_students(); ++s) {
    const int l = inst_.student(s).level;
    for (SchoolIdx c : inst_.student(s).prefs) {
      if (c == mu[s]) break;
      if (load[static_cast<size_t>(c) * nl + l] < inst_.capacity(c, l)) {
        return false;
      }
    }
  }
  return true;
}

bool StabilityChecker::initially_stable(const Matching& mu) const {
  if (!non_wasteful(mu)) return false;
  const int nl = inst_.num_levels();
  // Worst initial position among the occupants of each (school, level).
  std::vector<int> worst(static_cast<size_t>(inst_.num_schools()) * nl, -1);
  for (int s = 0; s < inst_.num_students(); ++s) {
    if (mu[s] == kUnassigned) continue;
    int& w = worst[static_cast<size_t>(mu[s]) * nl + inst_.student(s).level];
    w = std::max(w, init_.position(mu[s], s));
  }
  for (int s = 0; s < inst_.num_students(); ++s) {
    const int l = inst_.student(s).level;
    for (SchoolIdx c : inst_.student(s).prefs) {
      if (c == mu[s]) break;
      const int w = worst[static_cast<size_t>(c) * nl + l];
      if (w >= 0 && init_.position(c, s) < w) return false;
    }
  }
  return true;
}

bool StabilityChecker::is_candidate(const Matching& mu, StudentIdx s) const {
  const SchoolIdx c = mu[s];
  if (c == kUnassigned) return false;
  bool sibling_benefits = false;
  for (StudentIdx t : inst_.family_of(s)) {
    if (t != s && inst_.feasible(t, c) &&
        inst_.pref_key(t, mu[t]) >= inst_.pref_key(t, c)) {
      sibling_benefits = true;
      break;
    }
  }
  if (!sibling_benefits) return false;
  const int l = inst_.student(s).level;
  int rivals = 0;
  for (StudentIdx t : inst_.students_at_level(l)) {
    if (t != s && init_.higher(c, t, s) && inst_.listed(t, c) &&
        inst_.weakly_prefers(t, c, mu[t])) {
      ++rivals;
    }
  }
  return rivals <= inst_.capacity(c, l) - 1;
}

PairList StabilityChecker::candidates(const Matching& mu) const {
  PairList out;
  for (int s = 0; s < inst_.num_students(); ++s) {
    if (is_candidate(mu, s)) out.emplace_back(s, mu[s]);
  }
  return out;
}

ProviderSelection StabilityChecker::hard_providers(const Matching& mu) const {
  std::map<std::pair<FamilyIdx, SchoolIdx>, StudentIdx> best;
  for (const auto& [s, c] : candidates(mu)) {
    auto key = std::make_pair(inst_.student(s).family, c);
    auto it = best.find(key);
    if (it == best.end() || lot_.key(s, c) < lot_.key(it->second, c)) {
      best[key] = s;
    }
  }
  ProviderSelection z;
  for (const auto& [fc, s] : best) z.emplace_back(s, fc.second);
  std::sort(z.begin(), z.end());
  return z;
}

bool StabilityChecker::provider_invariant_holds(const Matching& mu) const {
  for (const auto& fam : inst_.families()) {
    if (fam.members.size() < 2) continue;
    for (StudentIdx s : fam.members) {
      const SchoolIdx c = mu[s];
      if (c == kUnassigned) continue;
      bool needs = false;
      for (StudentIdx t : fam.members) {
        if (t != s && inst_.feasible(t, c) &&
            inst_.pref_key(t, mu[t]) >= inst_.pref_key(t, c)) {
          needs = true;
        }
      }
      if (!needs) continue;
      bool has = false;
      for (StudentIdx t : fam.members) {
        if (mu[t] == c && is_candidate(mu, t)) has = true;
      }
      if (!has) return false;
    }
  }
  return true;
}

void StabilityChecker::school_keys(const Matching& mu,
                                   const ProviderSelection& z,
                                   PriorityKind kind, SchoolIdx c,
                                   std::vector<OrderKey>& keys,
                                   std::vector<OrderKey>& own) const {
  const int n = inst_.num_students();
  const int nf = inst_.num_families();
  const int G = inst_.num_groups();
  std::vector<char> flagged(n, 0);
  // Best flagged key per family at c (partial) and whether any flag exists.
  std::vector<char> fam_flag(nf, 0);
  std::vector<LotteryKey> fam_best(nf);
  for (const auto& [s, cc] : z) {
    if (cc != c) continue;
    flagged[s] = 1;
    const FamilyIdx f = inst_.student(s).family;
    if (!fam_flag[f] || lot_.key(s, c) < fam_best[f]) {
      fam_best[f] = lot_.key(s, c);
    }
    fam_flag[f] = 1;
  }
  std::vector<int> at_c(nf, 0);
  for (int s = 0; s < n; ++s) {
    if (mu[s] == c) ++at_c[inst_.student(s).family];
  }
  keys.resize(n);
  own.resize(n);
  for (int s = 0; s < n; ++s) {
    const int g = inst_.group(s, c);
    const LotteryKey& p = lot_.key(s, c);
    const FamilyIdx f = inst_.student(s).family;
    // Another member of the family is flagged at c.
    bool receives = false;
    if (fam_flag[f]) {
      for (StudentIdx t : inst_.family_of(s)) {
        if (t != s && flagged[t]) receives = true;
      }
    }
    if (kind == PriorityKind::kAbsolute) {
      int gmu = G + 1;
      int gown = G + 1;
      if (g < G) {
        gmu = gown = g;
      } else if (flagged[s] && at_c[f] >= 2) {
        gmu = gown = g;
      } else if (receives) {
        gmu = g;
      }
      keys[s] = {gmu, p, 0, 0};
      own[s] = {gown, p, 0, 0};
    } else {
      own[s] = {g, p, 0, 0};
      keys[s] = own[s];
      if (g == G && !flagged[s] && receives) {
        LotteryKey best = p;
        for (StudentIdx t : inst_.family_of(s)) {
          if (t != s && flagged[t] && lot_.key(t, c) < best) {
            best = lot_.key(t, c);
          }
        }
        if (best < p) keys[s] = {g, best, 1, init_.position(c, s)};
      }
    }
  }
}

bool StabilityChecker::school_envy_free(const Matching& mu,
                                        const ProviderSelection& z,
                                        PriorityKind kind, SchoolIdx c,
                                        std::vector<EnvyTriple>* out) const {
  std::vector<OrderKey> keys, own;
  school_keys(mu, z, kind, c, keys, own);
  bool ok = true;
  for (int s = 0; s < inst_.num_students(); ++s) {
    if (mu[s] == c || !inst_.feasible(s, c) || !inst_.prefers(s, c, mu[s])) {
      continue;
    }
    const int l = inst_.student(s).level;
    for (int t = 0; t < inst_.num_students(); ++t) {
      if (mu[t] != c || inst_.student(t).level != l) continue;
      const OrderKey& ks = inst_.are_siblings(s, t) ? own[s] : keys[s];
      if (ks < keys[t]) {
        ok = false;
        if (out == nullptr) return false;
        out->push_back({s, t, c});
      }
    }
  }
  return ok;
}

bool StabilityChecker::contingent_stable(const Matching& mu,
                                         const ProviderSelection& z,
                                         PriorityKind kind) const {
  if (!non_wasteful(mu)) return false;
  for (int c = 0; c < inst_.num_schools(); ++c) {
    if (!school_envy_free(mu, z, kind, c, nullptr)) return false;
  }
  return provider_invariant_holds(mu);
}

bool StabilityChecker::soft_stable(const Matching& mu, PriorityKind kind,
                                   ProviderSelection* witness,
                                   int candidate_bound) const {
  const PairList cands = candidates(mu);
  if (static_cast<int>(cands.size()) > candidate_bound) {
    throw Error(ErrorCode::kSearchTooLarge,
                std::to_string(cands.size()) +
                    " provider candidates exceed the search bound " +
                    std::to_string(candidate_bound));
  }
  if (!non_wasteful(mu) || !provider_invariant_holds(mu)) return false;
  ProviderSelection chosen;
  for (int c = 0; c < inst_.num_schools(); ++c) {
    // One option list per family: the family's candidates at c.
    std::map<FamilyIdx, std::vector<StudentIdx>> options;
    for (const auto& [s, cc] : cands) {
      if (cc == c) options[inst_.student(s).family].push_back(s);
    }
    std::vector<std::vector<StudentIdx>> groups;
    for (auto& [f, v] : options) groups.push_back(v);
    ProviderSelection zc;
    bool found = false;
    // Depth-first over "no flag" then each candidate, per family.
    auto dfs = [&](auto&& self, size_t i) -> bool {
      if (i == groups.size()) return school_envy_free(mu, zc, kind, c, nullptr);
      if (self(self, i + 1)) return true;
      for (StudentIdx s : groups[i]) {
        zc.emplace_back(s, c);
        if (self(self, i + 1)) return true;
        zc.pop_back();
      }
      return false;
    };
    found = dfs(dfs, 0);
    if (!found) return false;
    chosen.insert(chosen.end(), zc.begin(), zc.end());
  }
  if (witness != nullptr) {
    std::sort(chosen.begin(), chosen.end());
    *witness = chosen;
  }
  return true;
}

StabilityReport StabilityChecker::report(const Matching& mu,
                                         const ProviderSelection* z,
                                         PriorityKind kind,
                                         bool initial_only) const {
  StabilityReport r;
  const int nl = inst_.num_levels();
  std::vector<int> load(static_cast<size_t>(inst_.num_schools()) * nl, 0);
  for (int s = 0; s < inst_.num_students(); ++s) {
    if (mu[s] != kUnassigned) {
      ++load[static_cast<size_t>(mu[s]) * nl + inst_.student(s).level];
    }
  }
  for (int s = 0; s < inst_.num_students(); ++s) {
    const int l = inst_.student(s).level;
    for (SchoolIdx c : inst_.student(s).prefs) {
      if (c == mu[s]) break;
      if (load[static_cast<size_t>(c) * nl + l] < inst_.capacity(c, l)) {
        r.wasteful_pairs.emplace_back(s, c);
      }
    }
  }
  if (initial_only) {
    for (int s = 0; s < inst_.num_students(); ++s) {
      for (SchoolIdx c : inst_.student(s).prefs) {
        if (c == mu[s]) break;
        for (int t = 0; t < inst_.num_students(); ++t) {
          if (mu[t] == c && inst_.student(t).level == inst_.student(s).level &&
              init_.higher(c, s, t)) {
            r.envy_triples.push_back({s, t, c});
          }
        }
      }
    }
  } else {
    for (int c = 0; c < inst_.num_schools(); ++c) {
      school_envy_free(mu, *z, kind, c, &r.envy_triples);
    }
    for (const auto& fam : inst_.families()) {
      for (int c = 0; c < inst_.num_schools(); ++c) {
        bool member_at_c = false, needs = false, has = false;
        for (StudentIdx s : fam.members) {
          if (mu[s] != c) continue;
          member_at_c = true;
          if (is_candidate(mu, s)) has = true;
          for (StudentIdx t : fam.members) {
            if (t != s && inst_.feasible(t, c) &&
                inst_.pref_key(t, mu[t]) >= inst_.pref_key(t, c)) {
              needs = true;
            }
          }
        }
        if (member_at_c && needs && !has) {
          r.provider_violations.push_back(
              {inst_.student(fam.members[0]).family, c});
        }
      }
    }
  }
  std::sort(r.envy_triples.begin(), r.envy_triples.end(),
            [](const EnvyTriple& a, const EnvyTriple& b) {
              return std::tie(a.envier, a.envied, a.school) <
                     std::tie(b.envier, b.envied, b.school);
            });
  r.stable = r.wasteful_pairs.empty() && r.envy_triples.empty() &&
             r.provider_violations.empty();
  return r;
}

PairList provider_candidates(const Instance& inst, const LotteryProfile& lot,
                             const Matching& mu) {
  check_matching(inst, mu);
  return StabilityChecker(inst, lot).candidates(mu);
}

ProviderSelection effective_providers_hard(const Instance& inst,
                                           const LotteryProfile& lot,
                                           const Matching& mu) {
  check_matching(inst, mu);
  return StabilityChecker(inst, lot).hard_providers(mu);
}

namespace {

ContingentOrder BuildOrder(const Instance& inst, const LotteryProfile& lot,
                           const Matching& mu, const ProviderSelection& z,
                           PriorityKind kind) {
  check_matching(inst, mu);
  StabilityChecker checker(inst, lot);
  ContingentOrder out(inst.num_students(), inst.num_schools());
  std::vector<OrderKey> keys, own;
  for (int c = 0; c < inst.num_schools(); ++c) {
    checker.school_keys(mu, z, kind, c, keys, own);
    for (int s = 0; s < inst.num_students(); ++s) out.set(c, s, keys[s], own[s]);
  }
  return out;
}

void CheckSoftSelection(const StabilityChecker& checker, const Matching& mu,
                        const ProviderSelection& z) {
  const Instance& inst = checker.instance();
  const PairList cands = checker.candidates(mu);
  std::map<std::pair<FamilyIdx, SchoolIdx>, int> per_family;
  for (const auto& pc : z) {
    if (std::find(cands.begin(), cands.end(), pc) == cands.end()) {
      throw Error(ErrorCode::kInconsistentZ,
                  "(" + inst.student(pc.first).id + ", " +
                      inst.school(pc.second).id +
                      ") does not satisfy the provider conditions");
    }
    if (++per_family[{inst.student(pc.first).family, pc.second}] > 1) {
      throw Error(ErrorCode::kInconsistentZ,
                  "more than one provider flagged for family " +
                      inst.family(inst.student(pc.first).family).id + " at " +
                      inst.school(pc.second).id);
    }
  }
}

}  // namespace

ContingentOrder contingent_order_absolute(const Instance& inst,
                                          const LotteryProfile& lot,
                                          const Matching& mu,
                                          const ProviderSelection& z) {
  return BuildOrder(inst, lot, mu, z, PriorityKind::kAbsolute);
}

ContingentOrder contingent_order_partial(const Instance& inst,
                                         const LotteryProfile& lot,
                                         const Matching& mu,
                                         const ProviderSelection& z) {
  return BuildOrder(inst, lot, mu, z, PriorityKind::kPartial);
}

StabilityReport verify_initial_stable(const Instance& inst,
                                      const LotteryProfile& lot,
                                      const Matching& mu) {
  check_matching(inst, mu);
  return StabilityChecker(inst, lot).report(mu, nullptr,
                                            PriorityKind::kAbsolute, true);
}

StabilityReport verify_contingent_stable(const Instance& inst,
                                         const LotteryProfile& lot,
                                         const Matching& mu,
                                         const ProviderSelection* z,
                                         PriorityKind kind,
                                         Enforcement enforcement) {
  check_matching(inst, mu);
  StabilityChecker checker(inst, lot);
  ProviderSelection used;
  if (enforcement == Enforcement::kHard) {
    used = checker.hard_providers(mu);
    if (z != nullptr) {
      ProviderSelection given = *z;
      std::sort(given.begin(), given.end());
      if (given != used) {
        throw Error(ErrorCode::kInconsistentZ,
                    "supplied providers differ from the effective providers");
      }
    }
  } else {
    if (z != nullptr) used = *z;
    std::sort(used.begin(), used.end());
    CheckSoftSelection(checker, mu, used);
  }
  return checker.report(mu, &used, kind, false);
}

SoftSearchResult soft_stability_exists(const Instance& inst,
                                       const LotteryProfile& lot,
                                       const Matching& mu, PriorityKind kind,
                                       int candidate_bound) {
  check_matching(inst, mu);
  SoftSearchResult res;
  res.exists = StabilityChecker(inst, lot).soft_stable(mu, kind, &res.witness,
                                                       candidate_bound);
  return res;
}

Json report_to_json(const Instance& inst, const StabilityReport& r) {
  Json doc;
  doc["stable"] = r.stable;
  Json waste = Json::array();
  for (const auto& [s, c] : r.wasteful_pairs) {
    waste.push_back({{"student", inst.student(s).id},
                     {"school", inst.school(c).id}});
  }
  doc["wasteful"] = waste;
  Json envy = Json::array();
  for (const auto& e : r.envy_triples) {
    envy.push_back({{"student", inst.student(e.envier).id},
                    {"envied", inst.student(e.envied).id},
                    {"school", inst.school(e.school).id}});
  }
  doc["envy"] = envy;
  Json prov = Json::array();
  for (const auto& v : r.provider_violations) {
    prov.push_back({{"family", inst.family(v.family).id},
                    {"school", inst.school(v.school).id}});
  }
  doc["provider"] = prov;
  return doc;
}

}  // namespace sibmatch
