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

#ifndef SIBMATCH_STABILITY_H_
#define SIBMATCH_STABILITY_H_

#include <compare>
#include <utility>
#include <vector>

#include "sibmatch/instance.h"
#include "sibmatch/io.h"
#include "sibmatch/lottery.h"

namespace sibmatch {

enum class PriorityKind { kAbsolute, kPartial };
enum class Enforcement { kHard, kSoft };

const char* KindName(PriorityKind kind);

// Flagged (student, school) pairs, kept sorted.
using ProviderSelection = PairList;

// Position of a student in a contingent order; smaller is higher priority.
struct OrderKey {
  int group = 0;
  LotteryKey key;
  int tier = 0;  // 1 for receivers sharing an inherited key
  int sub = 0;   // initial position, orders receivers of one provider

  auto operator<=>(const OrderKey&) const = default;
};

class ContingentOrder {
 public:
  ContingentOrder(int num_students, int num_schools);

  const OrderKey& key(SchoolIdx c, StudentIdx s) const {
    return keys_[static_cast<size_t>(c) * n_ + s];
  }
  // Priority of s at c ignoring anything s receives from its own family.
  // Used when s is compared against one of its siblings.
  const OrderKey& own_key(SchoolIdx c, StudentIdx s) const {
    return own_[static_cast<size_t>(c) * n_ + s];
  }
  bool higher(SchoolIdx c, StudentIdx a, StudentIdx b) const {
    return key(c, a) < key(c, b);
  }
  // Strict order at c, highest priority first.
  std::vector<StudentIdx> order(SchoolIdx c) const;

  void set(SchoolIdx c, StudentIdx s, OrderKey k, OrderKey own) {
    keys_[static_cast<size_t>(c) * n_ + s] = k;
    own_[static_cast<size_t>(c) * n_ + s] = own;
  }

 private:
  int n_;
  std::vector<OrderKey> keys_;
  std::vector<OrderKey> own_;
};

struct EnvyTriple {
  StudentIdx envier;
  StudentIdx envied;
  SchoolIdx school;
  bool operator==(const EnvyTriple&) const = default;
};

struct ProviderViolation {
  FamilyIdx family;
  SchoolIdx school;
  bool operator==(const ProviderViolation&) const = default;
};

struct StabilityReport {
  bool stable = true;
  PairList wasteful_pairs;
  std::vector<EnvyTriple> envy_triples;
  std::vector<ProviderViolation> provider_violations;
};

Json report_to_json(const Instance& inst, const StabilityReport& r);

PairList provider_candidates(const Instance& inst, const LotteryProfile& lot,
                             const Matching& mu);

// Lowest-key candidate per family and school.
ProviderSelection effective_providers_hard(const Instance& inst,
                                           const LotteryProfile& lot,
                                           const Matching& mu);

ContingentOrder contingent_order_absolute(const Instance& inst,
                                          const LotteryProfile& lot,
                                          const Matching& mu,
                                          const ProviderSelection& z);
ContingentOrder contingent_order_partial(const Instance& inst,
                                         const LotteryProfile& lot,
                                         const Matching& mu,
                                         const ProviderSelection& z);

StabilityReport verify_initial_stable(const Instance& inst,
                                      const LotteryProfile& lot,
                                      const Matching& mu);

// Hard: z is recomputed; a caller-supplied z must match it (INCONSISTENT_Z).
// Soft: z must be a subset of the candidates with at most one flag per family
// and school.
StabilityReport verify_contingent_stable(const Instance& inst,
                                         const LotteryProfile& lot,
                                         const Matching& mu,
                                         const ProviderSelection* z,
                                         PriorityKind kind,
                                         Enforcement enforcement);

struct SoftSearchResult {
  bool exists = false;
  ProviderSelection witness;
};

// Envy at a school depends only on the flags at that school, so the search
// runs school by school.
SoftSearchResult soft_stability_exists(const Instance& inst,
                                       const LotteryProfile& lot,
                                       const Matching& mu, PriorityKind kind,
                                       int candidate_bound = 20);

// Reusable checker for tight loops (oracle enumeration, fuzzing). Holds the
// initial order so repeated calls only pay for the matching-dependent work.
class StabilityChecker {
 public:
  StabilityChecker(const Instance& inst, const LotteryProfile& lot);

  const Instance& instance() const { return inst_; }
  const InitialOrder& initial() const { return init_; }

  bool non_wasteful(const Matching& mu) const;
  bool initially_stable(const Matching& mu) const;
  PairList candidates(const Matching& mu) const;
  ProviderSelection hard_providers(const Matching& mu) const;
  bool provider_invariant_holds(const Matching& mu) const;
  bool contingent_stable(const Matching& mu, const ProviderSelection& z,
                         PriorityKind kind) const;
  bool soft_stable(const Matching& mu, PriorityKind kind,
                   ProviderSelection* witness, int candidate_bound) const;

  // Fills every list of the report.
  StabilityReport report(const Matching& mu, const ProviderSelection* z,
                         PriorityKind kind, bool initial_only) const;

  // Contingent keys of every student at c given the flags in z.
  void school_keys(const Matching& mu, const ProviderSelection& z,
                   PriorityKind kind, SchoolIdx c, std::vector<OrderKey>& keys,
                   std::vector<OrderKey>& own) const;

 private:
  bool school_envy_free(const Matching& mu, const ProviderSelection& z,
                        PriorityKind kind, SchoolIdx c,
                        std::vector<EnvyTriple>* out) const;
  bool is_candidate(const Matching& mu, StudentIdx s) const;

  const Instance& inst_;
  const LotteryProfile& lot_;
  InitialOrder init_;
};

}  // namespace sibmatch

#endif  // SIBMATCH_STABILITY_H_
