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


#include "support.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sibmatch::testing {

Instance tiny_instance(std::mt19937_64& rng, const TinyConfig& cfg) {
  std::uniform_int_distribution<int> size(std::min(cfg.min_students, cfg.max_students),
                                          cfg.max_students);
  std::uniform_int_distribution<int> level(0, cfg.num_levels - 1);
  std::uniform_int_distribution<int> len(1, cfg.num_schools);
  std::bernoulli_distribution join(cfg.sibling_prob);
  const int n = size(rng);
  // Mean seats per (school, level) so that total supply is about
  // seat_scale times the students of that level.
  const double mean_cap = cfg.seat_scale * n / (cfg.num_levels * cfg.num_schools);
  std::binomial_distribution<int> cap(cfg.max_capacity,
                                      std::min(1.0, mean_cap / std::max(1, cfg.max_capacity)));

  InstanceSpec spec;
  for (int l = 0; l < cfg.num_levels; ++l) spec.levels.push_back("l" + std::to_string(l + 1));
  for (int c = 0; c < cfg.num_schools; ++c) {
    SchoolSpec school{"c" + std::to_string(c + 1), {}};
    for (const auto& l : spec.levels) school.capacity.emplace_back(l, cap(rng));
    spec.schools.push_back(std::move(school));
  }
  std::vector<double> weight(cfg.num_schools);
  for (int c = 0; c < cfg.num_schools; ++c) weight[c] = std::pow(c + 1.0, -cfg.popularity_skew);
  const int max_members = cfg.distinct_levels ? std::min(3, cfg.num_levels) : 3;
  int family = 0, members = 0;
  std::vector<int> free_levels;
  for (int s = 0; s < n; ++s) {
    if (s == 0 || members >= max_members || !join(rng)) {
      ++family;
      members = 0;
      free_levels.resize(cfg.num_levels);
      std::iota(free_levels.begin(), free_levels.end(), 0);
      std::shuffle(free_levels.begin(), free_levels.end(), rng);
    }
    ++members;
    int lvl = level(rng);
    if (cfg.distinct_levels) {
      lvl = free_levels.back();
      free_levels.pop_back();
    }
    // Popularity-weighted order without replacement.
    std::vector<double> w = weight;
    std::vector<std::string> prefs;
    const int k = len(rng);
    for (int j = 0; j < k; ++j) {
      std::discrete_distribution<int> pick(w.begin(), w.end());
      const int c = pick(rng);
      prefs.push_back(spec.schools[c].id);
      w[c] = 0.0;
    }
    spec.students.push_back({"s" + std::to_string(s + 1),
                             "f" + std::to_string(family),
                             spec.levels[lvl], std::move(prefs)});
  }
  return validate_instance(spec);
}

Matching random_matching(const Instance& inst, std::mt19937_64& rng) {
  const int n = inst.num_students();
  Matching mu(n, kUnassigned);
  for (int s = 0; s < n; ++s) {
    std::vector<SchoolIdx> options = inst.feasible_schools(s);
    options.push_back(kUnassigned);
    mu[s] = options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> used(static_cast<size_t>(inst.num_schools()) * inst.num_levels(), 0);
  for (int s : order) {
    if (mu[s] == kUnassigned) continue;
    int& u = used[static_cast<size_t>(mu[s]) * inst.num_levels() + inst.student(s).level];
    if (u < inst.capacity_for(s, mu[s])) {
      ++u;
    } else {
      mu[s] = kUnassigned;
    }
  }
  return mu;
}

namespace {

// Position of c in the list, or list length + 1 for "unassigned"/unlisted.
int PrefIndex(const Instance& inst, StudentIdx s, SchoolIdx c) {
  const auto& p = inst.student(s).prefs;
  auto it = std::find(p.begin(), p.end(), c);
  return it == p.end() ? static_cast<int>(p.size()) + 1 : static_cast<int>(it - p.begin());
}

bool AbleToAttend(const Instance& inst, StudentIdx s, SchoolIdx c) {
  const auto& p = inst.student(s).prefs;
  return std::find(p.begin(), p.end(), c) != p.end() && inst.capacity_for(s, c) > 0;
}

bool HigherAt(const LotteryProfile& lot, const Instance& inst, SchoolIdx c,
              StudentIdx a, StudentIdx b) {
  if (inst.group(a, c) != inst.group(b, c)) return inst.group(a, c) < inst.group(b, c);
  if (lot.key(a, c) != lot.key(b, c)) return lot.key(a, c) < lot.key(b, c);
  return a < b;
}

bool SiblingWeaklyWorse(const Instance& inst, const Matching& mu, StudentIdx s,
                        SchoolIdx c) {
  for (StudentIdx t = 0; t < inst.num_students(); ++t) {
    if (t == s || inst.student(t).family != inst.student(s).family) continue;
    if (AbleToAttend(inst, t, c) && PrefIndex(inst, t, mu[t]) >= PrefIndex(inst, t, c))
      return true;
  }
  return false;
}

}  // namespace

bool direct_candidate(const Instance& inst, const LotteryProfile& lot,
                      const Matching& mu, StudentIdx s) {
  const SchoolIdx c = mu[s];
  if (c == kUnassigned || !SiblingWeaklyWorse(inst, mu, s, c)) return false;
  int ahead = 0;
  for (StudentIdx t = 0; t < inst.num_students(); ++t) {
    if (t == s || inst.student(t).level != inst.student(s).level) continue;
    const auto& p = inst.student(t).prefs;
    if (std::find(p.begin(), p.end(), c) == p.end()) continue;
    if (HigherAt(lot, inst, c, t, s) && PrefIndex(inst, t, c) <= PrefIndex(inst, t, mu[t]))
      ++ahead;
  }
  return ahead <= inst.capacity_for(s, c) - 1;
}

bool direct_provider_existence(const Instance& inst, const LotteryProfile& lot,
                               const Matching& mu) {
  for (StudentIdx s = 0; s < inst.num_students(); ++s) {
    const SchoolIdx c = mu[s];
    if (c == kUnassigned || !SiblingWeaklyWorse(inst, mu, s, c)) continue;
    bool found = false;
    for (StudentIdx t = 0; t < inst.num_students(); ++t) {
      if (inst.student(t).family == inst.student(s).family && mu[t] == c &&
          direct_candidate(inst, lot, mu, t))
        found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace sibmatch::testing
