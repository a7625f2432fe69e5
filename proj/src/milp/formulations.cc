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

#include "sibmatch/milp/formulations.h"

#include <algorithm>
#include <map>
#include <string>

#include "sibmatch/error.h"

namespace sibmatch::milp {

namespace {

class Builder {
 public:
  Builder(const Instance& inst, const LotteryProfile& lot, MilpModel& model)
      : inst_(inst), order_(inst, lot), model_(model) {}

  const std::string& sid(StudentIdx s) const { return inst_.student(s).id; }
  std::string cid(SchoolIdx c) const {
    return c == kUnassigned ? std::string("none") : inst_.school(c).id;
  }
  bool higher(SchoolIdx c, StudentIdx a, StudentIdx b) const {
    return order_.higher(c, a, b);
  }
  StudentIdx better(SchoolIdx c, StudentIdx a, StudentIdx b) const {
    return higher(c, a, b) ? a : b;
  }

  void add_x() {
    for (int s = 0; s < inst_.num_students(); ++s) {
      for (SchoolIdx c : inst_.feasible_schools(s)) {
        model_.add_var({"x_" + sid(s) + "_" + cid(c), VarKind::kX, s, -1, c,
                        inst_.rank(s, c)});
      }
      model_.add_var({"x_" + sid(s) + "_none", VarKind::kX, s, -1,
                      kUnassigned, inst_.rank(s, kUnassigned)});
    }
  }

  void add_assignment_rows() {
    for (int s = 0; s < inst_.num_students(); ++s) {
      std::vector<Term> t;
      for (SchoolIdx c : inst_.feasible_schools(s)) t.push_back({model_.x(s, c), 1});
      t.push_back({model_.x(s, kUnassigned), 1});
      model_.add_constraint("assign_" + sid(s), std::move(t), Sense::kEq, 1);
    }
    for (int c = 0; c < inst_.num_schools(); ++c) {
      for (int l = 0; l < inst_.num_levels(); ++l) {
        std::vector<Term> t;
        for (StudentIdx s : inst_.students_at_level(l)) {
          if (inst_.feasible(s, c)) t.push_back({model_.x(s, c), 1});
        }
        if (t.empty()) continue;
        model_.add_constraint("cap_" + cid(c) + "_" + inst_.levels()[l],
                              std::move(t), Sense::kLe, inst_.capacity(c, l));
      }
    }
  }

  // -q * sum_{c' weakly better than c for s} x_{s,c'}.
  void own_terms(StudentIdx s, SchoolIdx c, std::int64_t q,
                 std::vector<Term>& t) const {
    for (SchoolIdx c2 : inst_.feasible_schools(s)) {
      t.push_back({model_.x(s, c2), -q});
      if (c2 == c) break;
    }
  }

  // Sum of x_{a,c} over same-level a with higher initial priority.
  void higher_terms(StudentIdx s, SchoolIdx c, std::vector<Term>& t) const {
    for (StudentIdx a : inst_.students_at_level(inst_.student(s).level)) {
      if (a != s && inst_.feasible(a, c) && higher(c, a, s)) {
        t.push_back({model_.x(a, c), -1});
      }
    }
  }

  // Initial-stability cut for (s,c): written as <= with negated sides.
  void plain_cut(StudentIdx s, SchoolIdx c) {
    const std::int64_t q = inst_.capacity_for(s, c);
    std::vector<Term> t;
    own_terms(s, c, q, t);
    higher_terms(s, c, t);
    model_.add_constraint("stab_" + sid(s) + "_" + cid(c), std::move(t),
                          Sense::kLe, -q);
  }

  // Members of s's family (other than s) that have an x variable at c.
  std::vector<StudentIdx> siblings_at(StudentIdx s, SchoolIdx c) const {
    std::vector<StudentIdx> out;
    for (StudentIdx t : inst_.family_of(s)) {
      if (t != s && inst_.feasible(t, c)) out.push_back(t);
    }
    return out;
  }

  void provider_region() {
    for (int c = 0; c < inst_.num_schools(); ++c) {
      for (int s = 0; s < inst_.num_students(); ++s) {
        if (!inst_.feasible(s, c) || siblings_at(s, c).empty()) continue;
        model_.add_var({"z_" + sid(s) + "_" + cid(c), VarKind::kZ, s, -1, c, 0});
      }
    }
    for (int c = 0; c < inst_.num_schools(); ++c) {
      for (int s = 0; s < inst_.num_students(); ++s) {
        const int zv = model_.z(s, c);
        if (zv < 0) continue;
        const std::string tag = sid(s) + "_" + cid(c);
        model_.add_constraint("prov_at_" + tag,
                              {{zv, 1}, {model_.x(s, c), -1}}, Sense::kLe, 0);
        std::vector<Term> sib{{zv, 1}};
        for (StudentIdx t : siblings_at(s, c)) sib.push_back({model_.x(t, c), -1});
        model_.add_constraint("prov_sib_" + tag, std::move(sib), Sense::kLe, 0);
        // Rivals above s that weakly prefer c to their assignment.
        const int l = inst_.student(s).level;
        const std::int64_t big_m =
            static_cast<std::int64_t>(inst_.students_at_level(l).size());
        std::vector<Term> cnt;
        for (StudentIdx a : inst_.students_at_level(l)) {
          if (a == s || !higher(c, a, s) || !inst_.listed(a, c)) continue;
          bool reached = false;
          for (SchoolIdx c2 : inst_.feasible_schools(a)) {
            if (c2 == c) reached = true;
            if (reached) cnt.push_back({model_.x(a, c2), 1});
          }
          cnt.push_back({model_.x(a, kUnassigned), 1});
        }
        cnt.push_back({zv, big_m});
        model_.add_constraint("prov_claim_" + tag, std::move(cnt), Sense::kLe,
                              inst_.capacity_for(s, c) - 1 + big_m);
      }
      for (const auto& fam : inst_.families()) {
        std::vector<Term> t;
        for (StudentIdx s : fam.members) {
          if (model_.z(s, c) >= 0) t.push_back({model_.z(s, c), 1});
        }
        if (t.size() < 2) continue;
        model_.add_constraint("prov_one_" + fam.id + "_" + cid(c),
                              std::move(t), Sense::kLe, 1);
      }
    }
  }

  void receiver_region() {
    for (int c = 0; c < inst_.num_schools(); ++c) {
      for (int s = 0; s < inst_.num_students(); ++s) {
        if (model_.z(s, c) < 0) continue;
        for (StudentIdx r : siblings_at(s, c)) {
          model_.add_var({"y_" + sid(s) + "_" + sid(r) + "_" + cid(c),
                          VarKind::kY, s, r, c, 0});
        }
      }
    }
    for (int c = 0; c < inst_.num_schools(); ++c) {
      for (int s = 0; s < inst_.num_students(); ++s) {
        const int zs = model_.z(s, c);
        if (zs < 0) continue;
        for (StudentIdx r : siblings_at(s, c)) {
          const int yv = model_.y(s, r, c);
          const std::string tag = sid(s) + "_" + sid(r) + "_" + cid(c);
          model_.add_constraint("recv_at_" + tag,
                                {{yv, 1}, {model_.x(r, c), -1}}, Sense::kLe, 0);
          model_.add_constraint("recv_prov_" + tag, {{yv, 1}, {zs, -1}},
                                Sense::kLe, 0);
          // r cannot receive from s while s receives from r, and vice versa.
          const int back = model_.y(r, s, c);
          if (back >= 0) {
            model_.add_constraint("recv_excl_" + tag, {{back, 1}, {zs, 1}},
                                  Sense::kLe, 1);
          }
        }
      }
    }
  }

  // y_{a',a,c} terms for receiver a at c, optionally filtered by provider.
  template <typename Pred>
  void receiver_terms(StudentIdx a, SchoolIdx c, std::int64_t coef, Pred keep,
                      std::vector<Term>& t) const {
    for (StudentIdx p : siblings_at(a, c)) {
      const int yv = model_.y(p, a, c);
      if (yv >= 0 && keep(p)) t.push_back({yv, coef});
    }
  }

  void absolute_cut(StudentIdx s, SchoolIdx c) {
    const std::int64_t q = inst_.capacity_for(s, c);
    std::vector<Term> t;
    own_terms(s, c, q, t);
    for (StudentIdx a : inst_.students_at_level(inst_.student(s).level)) {
      if (a == s || !inst_.feasible(a, c)) continue;
      if (higher(c, a, s)) {
        t.push_back({model_.x(a, c), -1});
      } else {
        receiver_terms(a, c, -1, [](StudentIdx) { return true; }, t);
        if (model_.z(a, c) >= 0) t.push_back({model_.z(a, c), -1});
      }
    }
    model_.add_constraint("stab_" + sid(s) + "_" + cid(c), std::move(t),
                          Sense::kLe, -q);
  }

  void partial_cut(StudentIdx s, SchoolIdx c) {
    const std::int64_t q = inst_.capacity_for(s, c);
    std::vector<Term> t;
    own_terms(s, c, q, t);
    for (StudentIdx a : inst_.students_at_level(inst_.student(s).level)) {
      if (a == s || !inst_.feasible(a, c)) continue;
      if (higher(c, a, s)) {
        t.push_back({model_.x(a, c), -1});
      } else {
        receiver_terms(
            a, c, -1, [&](StudentIdx p) { return higher(c, p, s); }, t);
      }
    }
    model_.add_constraint("stab_" + sid(s) + "_" + cid(c), std::move(t),
                          Sense::kLe, -q);
  }

  // Displacement rows for a prioritized s (sibling s2 at c, or flagged when
  // soft) against outsider a at s's level. `only_last_group` restricts to
  // pairs in the no-priority group.
  void displacement_rows(PriorityKind kind, bool hard, bool only_last_group) {
    const int G = inst_.num_groups();
    for (int c = 0; c < inst_.num_schools(); ++c) {
      for (const auto& fam : inst_.families()) {
        for (StudentIdx s : fam.members) {
          if (!inst_.feasible(s, c)) continue;
          if (only_last_group && inst_.group(s, c) != G) continue;
          for (StudentIdx s2 : fam.members) {
            if (s2 == s || !inst_.feasible(s2, c)) continue;
            const int lhs_var = hard ? model_.x(s2, c) : model_.z(s2, c);
            for (StudentIdx a : inst_.students_at_level(inst_.student(s).level)) {
              if (inst_.are_siblings(a, s) || a == s || !inst_.feasible(a, c)) {
                continue;
              }
              if (only_last_group && inst_.group(a, c) != G) continue;
              std::vector<Term> t{{lhs_var, 1}};
              own_terms(s, c, 1, t);
              if (kind == PriorityKind::kAbsolute) {
                t.push_back({model_.x(a, c), 1});
                if (higher(c, a, s)) {
                  if (model_.z(a, c) >= 0) t.push_back({model_.z(a, c), -1});
                  receiver_terms(a, c, -1, [](StudentIdx) { return true; }, t);
                }
              } else {
                const StudentIdx best = better(c, s, s2);
                if (!higher(c, best, a)) continue;  // a outranks both
                t.push_back({model_.x(a, c), 1});
                receiver_terms(
                    a, c, -1,
                    [&](StudentIdx p) { return higher(c, p, best); }, t);
              }
              model_.add_constraint("disp_" + sid(s) + "_" + sid(s2) + "_" +
                                        sid(a) + "_" + cid(c),
                                    std::move(t), Sense::kLe, 1);
            }
          }
        }
      }
    }
  }

  template <typename Fn>
  void for_each_pair(Fn fn) const {
    for (int s = 0; s < inst_.num_students(); ++s) {
      for (SchoolIdx c : inst_.feasible_schools(s)) fn(s, c);
    }
  }

  const Instance& inst() const { return inst_; }
  const InitialOrder& order() const { return order_; }

 private:
  const Instance& inst_;
  InitialOrder order_;
  MilpModel& model_;
};

MilpModel BuildContingent(const Instance& inst, const LotteryProfile& lot,
                          PriorityKind kind, bool hard, bool static_groups) {
  MilpModel model(inst.num_students(), inst.num_schools());
  Builder b(inst, lot, model);
  b.add_x();
  b.add_assignment_rows();
  b.provider_region();
  b.receiver_region();
  const int G = inst.num_groups();
  b.for_each_pair([&](StudentIdx s, SchoolIdx c) {
    if (static_groups && inst.group(s, c) < G) {
      b.plain_cut(s, c);
    } else if (kind == PriorityKind::kAbsolute) {
      b.absolute_cut(s, c);
    } else {
      b.partial_cut(s, c);
    }
  });
  b.displacement_rows(kind, hard, static_groups);
  return model;
}

}  // namespace

MilpModel build_baseline(const Instance& inst, const LotteryProfile& lot) {
  MilpModel model(inst.num_students(), inst.num_schools());
  Builder b(inst, lot, model);
  b.add_x();
  b.add_assignment_rows();
  b.for_each_pair([&](StudentIdx s, SchoolIdx c) { b.plain_cut(s, c); });
  return model;
}

void build_provider_region(const Instance& inst, const LotteryProfile& lot,
                           MilpModel& model) {
  Builder(inst, lot, model).provider_region();
}

void build_receiver_region(const Instance& inst, MilpModel& model) {
  // The receiver rows do not depend on priorities.
  LotteryProfile flat(inst.num_students(), inst.num_schools());
  Builder(inst, flat, model).receiver_region();
}

MilpModel build_absolute(const Instance& inst, const LotteryProfile& lot,
                         bool hard) {
  return BuildContingent(inst, lot, PriorityKind::kAbsolute, hard, false);
}

MilpModel build_partial(const Instance& inst, const LotteryProfile& lot,
                        bool hard) {
  return BuildContingent(inst, lot, PriorityKind::kPartial, hard, false);
}

void add_min_providers(MilpModel& model, std::int64_t zeta) {
  std::vector<Term> t;
  for (int i = 0; i < model.num_vars(); ++i) {
    if (model.var(i).kind == VarKind::kZ) t.push_back({i, 1});
  }
  model.add_constraint("min_providers", std::move(t), Sense::kGe, zeta);
}

MilpModel build_fosm(const Instance& inst, const LotteryProfile& lot) {
  MilpModel model = build_baseline(inst, lot);
  model.set_sense(ObjectiveSense::kMaximize);
  for (int i = 0; i < model.num_vars(); ++i) model.set_objective(i, 0);
  // Singleton families contribute x - t = 0 and are left out.
  for (int f = 0; f < inst.num_families(); ++f) {
    const auto& fam = inst.family(f);
    const std::int64_t size = static_cast<std::int64_t>(fam.members.size());
    if (size < 2) continue;
    for (int c = 0; c < inst.num_schools(); ++c) {
      std::vector<Term> xs;
      for (StudentIdx s : fam.members) {
        if (inst.feasible(s, c)) xs.push_back({model.x(s, c), 1});
      }
      if (xs.empty()) continue;
      const std::string tag = fam.id + "_" + inst.school(c).id;
      const int tv = model.add_var({"t_" + tag, VarKind::kT, f, -1, c, -size});
      for (const Term& x : xs) {
        model.set_objective(x.var, model.var(x.var).objective + 1);
      }
      std::vector<Term> lo = xs;
      lo.push_back({tv, -size});
      model.add_constraint("fam_lo_" + tag, std::move(lo), Sense::kLe, 0);
      std::vector<Term> hi{{tv, 1}};
      for (const Term& x : xs) hi.push_back({x.var, -1});
      model.add_constraint("fam_hi_" + tag, std::move(hi), Sense::kLe, 0);
    }
  }
  return model;
}

MilpModel build_absolute_static(const Instance& inst,
                                const LotteryProfile& lot, bool hard) {
  if (inst.num_groups() >= 2) {
    std::vector<std::string> errs;
    for (int s = 0; s < inst.num_students(); ++s) {
      int secured = 0;
      for (int c = 0; c < inst.num_schools(); ++c) {
        if (inst.group(s, c) != 1) continue;
        ++secured;
        if (!inst.feasible(s, c)) {
          errs.push_back("student " + inst.student(s).id +
                         " holds secured enrollment at unlisted school " +
                         inst.school(c).id);
        }
      }
      if (secured > 1) {
        errs.push_back("student " + inst.student(s).id +
                       " holds secured enrollment at more than one school");
      }
    }
    for (int c = 0; c < inst.num_schools(); ++c) {
      for (int l = 0; l < inst.num_levels(); ++l) {
        int secured = 0;
        for (StudentIdx s : inst.students_at_level(l)) {
          if (inst.group(s, c) == 1) ++secured;
        }
        if (secured > inst.capacity(c, l)) {
          errs.push_back("school " + inst.school(c).id + " level " +
                         inst.levels()[l] + ": " + std::to_string(secured) +
                         " secured students exceed capacity");
        }
      }
    }
    if (!errs.empty()) {
      throw Error(ErrorCode::kAssumptionViolation,
                  "group mapping violates the secured-enrollment assumptions",
                  std::move(errs));
    }
  }
  return BuildContingent(inst, lot, PriorityKind::kAbsolute, hard, true);
}

std::vector<char> encode_matching(const MilpModel& model, const Matching& mu) {
  std::vector<char> v(model.num_vars(), 0);
  for (int s = 0; s < static_cast<int>(mu.size()); ++s) {
    const int xi = model.x(s, mu[s]);
    if (xi >= 0) v[xi] = 1;
  }
  // t is on when any member of the family sits at the school; the fam_lo
  // rows carry the membership.
  for (const auto& con : model.constraints()) {
    if (con.name.rfind("fam_lo_", 0) != 0) continue;
    int tv = -1;
    bool any = false;
    for (const Term& t : con.terms) {
      if (model.var(t.var).kind == VarKind::kT) {
        tv = t.var;
      } else if (v[t.var]) {
        any = true;
      }
    }
    if (tv >= 0) v[tv] = any ? 1 : 0;
  }
  return v;
}

Solution normalize_providers(const Instance& inst, const LotteryProfile& lot,
                             const MilpModel& model, const Solution& solution) {
  if (!solution.has_point() || model.first_violation(solution.values) >= 0) {
    throw Error(ErrorCode::kInfeasibleInput,
                "normalize_providers needs a feasible point");
  }
  const Matching mu = model.decode_matching(solution.values);
  StabilityChecker checker(inst, lot);
  const PairList cands = checker.candidates(mu);
  Solution out = solution;
  std::vector<char>& v = out.values;
  for (int c = 0; c < inst.num_schools(); ++c) {
    for (const auto& fam : inst.families()) {
      bool flagged = false;
      for (StudentIdx s : fam.members) {
        const int zv = model.z(s, c);
        if (zv >= 0 && v[zv]) flagged = true;
      }
      if (!flagged) continue;
      StudentIdx best = -1;
      for (StudentIdx s : fam.members) {
        if (std::find(cands.begin(), cands.end(), std::make_pair(s, c)) ==
            cands.end()) {
          continue;
        }
        if (best < 0 || lot.key(s, c) < lot.key(best, c)) best = s;
      }
      if (best < 0 || model.z(best, c) < 0) continue;
      for (StudentIdx s : fam.members) {
        const int zv = model.z(s, c);
        if (zv >= 0) v[zv] = (s == best);
        for (StudentIdx r : fam.members) {
          const int yv = model.y(s, r, c);
          if (yv < 0) continue;
          v[yv] = (s == best && mu[r] == c) ? 1 : 0;
        }
      }
    }
  }
  out.objective = model.objective_value(v);
  return out;
}

}  // namespace sibmatch::milp
