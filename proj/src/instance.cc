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

#include "sibmatch/instance.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "sibmatch/error.h"

namespace sibmatch {

namespace {

// Ids end up inside LP variable names, so keep them to a safe alphabet.
bool IsValidId(const std::string& id) {
  if (id.empty()) return false;
  for (char ch : id) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
              (ch >= '0' && ch <= '9') || ch == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::vector<SchoolIdx> Instance::feasible_schools(StudentIdx s) const {
  std::vector<SchoolIdx> out;
  for (SchoolIdx c : students_[s].prefs) {
    if (capacity_for(s, c) > 0) out.push_back(c);
  }
  return out;
}

int Instance::pref_key(StudentIdx s, SchoolIdx c) const {
  const int len = static_cast<int>(students_[s].prefs.size());
  if (c == kUnassigned) return len + 1;
  const int pos = pref_position(s, c);
  return pos > 0 ? pos : len + 2;
}

int Instance::rank(StudentIdx s, SchoolIdx c) const {
  if (c == kUnassigned) {
    return penalty_ == UnassignedPenalty::kListLengthPlusOne
               ? static_cast<int>(students_[s].prefs.size()) + 1
               : num_schools() + 1;
  }
  if (!feasible(s, c)) {
    throw Error(ErrorCode::kPairNotFeasible,
                "(" + students_[s].id + ", " + schools_[c].id +
                    ") is not a feasible pair");
  }
  return pref_position(s, c);
}

int Instance::student_index(const std::string& id) const {
  for (int i = 0; i < num_students(); ++i) {
    if (students_[i].id == id) return i;
  }
  return -1;
}

int Instance::school_index(const std::string& id) const {
  for (int i = 0; i < num_schools(); ++i) {
    if (schools_[i].id == id) return i;
  }
  return -1;
}

int Instance::level_index(const std::string& id) const {
  for (int i = 0; i < num_levels(); ++i) {
    if (levels_[i] == id) return i;
  }
  return -1;
}

void Instance::build_derived() {
  const size_t nc = schools_.size();
  position_.assign(students_.size() * nc, 0);
  by_level_.assign(levels_.size(), {});
  for (auto& f : families_) f.members.clear();
  for (int s = 0; s < num_students(); ++s) {
    const auto& st = students_[s];
    for (size_t k = 0; k < st.prefs.size(); ++k) {
      position_[static_cast<size_t>(s) * nc + st.prefs[k]] =
          static_cast<int>(k) + 1;
    }
    by_level_[st.level].push_back(s);
    families_[st.family].members.push_back(s);
  }
}

Instance Instance::with_groups(std::vector<int> dense_groups,
                               int num_groups) const {
  Instance out = *this;
  out.num_groups_ = std::max(1, num_groups);
  if (out.num_groups_ == 1) {
    out.groups_.clear();
  } else {
    out.groups_ = std::move(dense_groups);
  }
  return out;
}

Instance Instance::with_prefs(StudentIdx s,
                              std::vector<SchoolIdx> prefs) const {
  Instance out = *this;
  out.students_[s].prefs = std::move(prefs);
  out.build_derived();
  return out;
}

InstanceSpec Instance::to_spec() const {
  InstanceSpec spec;
  spec.levels = levels_;
  for (const auto& c : schools_) {
    SchoolSpec sc{c.id, {}};
    for (int l = 0; l < num_levels(); ++l) {
      sc.capacity.emplace_back(levels_[l], c.capacity[l]);
    }
    spec.schools.push_back(std::move(sc));
  }
  for (const auto& st : students_) {
    StudentSpec ss{st.id, families_[st.family].id, levels_[st.level], {}};
    for (SchoolIdx c : st.prefs) ss.prefs.push_back(schools_[c].id);
    spec.students.push_back(std::move(ss));
  }
  if (num_groups_ > 1) {
    spec.num_groups = num_groups_;
    for (int s = 0; s < num_students(); ++s) {
      for (int c = 0; c < num_schools(); ++c) {
        if (group(s, c) != num_groups_) {
          spec.groups.push_back(
              {students_[s].id, schools_[c].id, group(s, c)});
        }
      }
    }
  }
  return spec;
}

Instance validate_instance(const InstanceSpec& spec) {
  std::vector<std::string> errs;
  Instance inst;

  std::map<std::string, int> level_ix;
  for (const auto& l : spec.levels) {
    if (!IsValidId(l)) errs.push_back("levels: invalid label '" + l + "'");
    if (!level_ix.emplace(l, static_cast<int>(inst.levels_.size())).second) {
      errs.push_back("levels: duplicate label '" + l + "'");
      continue;
    }
    inst.levels_.push_back(l);
  }

  std::map<std::string, int> school_ix;
  for (const auto& sc : spec.schools) {
    const std::string where = "schools[" + sc.id + "]";
    if (!IsValidId(sc.id) || sc.id == "none") {
      errs.push_back(where + ".id: invalid id");
    }
    if (!school_ix.emplace(sc.id, static_cast<int>(inst.schools_.size()))
             .second) {
      errs.push_back(where + ": duplicate school id");
      continue;
    }
    School c{sc.id, std::vector<int>(inst.levels_.size(), 0)};
    for (const auto& [lvl, q] : sc.capacity) {
      auto it = level_ix.find(lvl);
      if (it == level_ix.end()) {
        errs.push_back(where + ".capacity: unknown level '" + lvl + "'");
      } else if (q < 0) {
        errs.push_back(where + ".capacity[" + lvl + "]: negative capacity");
      } else {
        c.capacity[it->second] = static_cast<int>(q);
      }
    }
    inst.schools_.push_back(std::move(c));
  }

  std::map<std::string, int> student_ix;
  std::map<std::string, int> family_ix;
  for (const auto& ss : spec.students) {
    const std::string where = "students[" + ss.id + "]";
    if (!IsValidId(ss.id)) errs.push_back(where + ".id: invalid id");
    if (!IsValidId(ss.family)) errs.push_back(where + ".family: invalid id");
    if (!student_ix.emplace(ss.id, static_cast<int>(inst.students_.size()))
             .second) {
      errs.push_back(where + ": duplicate student id");
      continue;
    }
    Student st;
    st.id = ss.id;
    auto lit = level_ix.find(ss.level);
    if (lit == level_ix.end()) {
      errs.push_back(where + ".level: unknown level '" + ss.level + "'");
    } else {
      st.level = lit->second;
    }
    auto [fit, inserted] =
        family_ix.emplace(ss.family, static_cast<int>(inst.families_.size()));
    if (inserted) inst.families_.push_back({ss.family, {}});
    st.family = fit->second;
    std::set<std::string> seen;
    for (const auto& p : ss.prefs) {
      if (!seen.insert(p).second) {
        errs.push_back(where + ".prefs: school '" + p + "' listed twice");
        continue;
      }
      auto cit = school_ix.find(p);
      if (cit == school_ix.end()) {
        errs.push_back(where + ".prefs: unknown school '" + p + "'");
        continue;
      }
      st.prefs.push_back(cit->second);
    }
    inst.students_.push_back(std::move(st));
  }

  int num_groups = spec.num_groups;
  for (const auto& g : spec.groups) num_groups = std::max(num_groups, g.g);
  inst.num_groups_ = std::max(1, num_groups);
  if (inst.num_groups_ > 1) {
    inst.groups_.assign(inst.students_.size() * inst.schools_.size(),
                        inst.num_groups_);
  }
  for (const auto& g : spec.groups) {
    const std::string where = "groups[" + g.student + "," + g.school + "]";
    auto sit = student_ix.find(g.student);
    auto cit = school_ix.find(g.school);
    if (sit == student_ix.end()) {
      errs.push_back(where + ": unknown student");
    } else if (cit == school_ix.end()) {
      errs.push_back(where + ": unknown school");
    } else if (g.g < 1) {
      errs.push_back(where + ".g: must be positive");
    } else if (inst.num_groups_ > 1) {
      inst.groups_[static_cast<size_t>(sit->second) * inst.schools_.size() +
                   cit->second] = g.g;
    }
  }

  if (!errs.empty()) {
    throw Error(ErrorCode::kValidation, "invalid instance", std::move(errs));
  }
  inst.build_derived();
  return inst;
}

void check_matching(const Instance& inst, const Matching& mu) {
  if (static_cast<int>(mu.size()) != inst.num_students()) {
    throw Error(ErrorCode::kInvalidMatching,
                "matching size does not equal the number of students");
  }
  std::vector<int> load(static_cast<size_t>(inst.num_schools()) *
                            std::max(1, inst.num_levels()),
                        0);
  for (int s = 0; s < inst.num_students(); ++s) {
    const SchoolIdx c = mu[s];
    if (c == kUnassigned) continue;
    if (c < 0 || c >= inst.num_schools() || !inst.feasible(s, c)) {
      throw Error(ErrorCode::kInvalidMatching,
                  "student " + inst.student(s).id +
                      " assigned outside the feasible pairs");
    }
    const int l = inst.student(s).level;
    if (++load[static_cast<size_t>(c) * inst.num_levels() + l] >
        inst.capacity(c, l)) {
      throw Error(ErrorCode::kInvalidMatching,
                  "capacity of " + inst.school(c).id + " at level " +
                      inst.levels()[l] + " exceeded");
    }
  }
}

bool is_valid_matching(const Instance& inst, const Matching& mu) {
  try {
    check_matching(inst, mu);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::int64_t rank_objective(const Instance& inst, const Matching& mu) {
  std::int64_t total = 0;
  for (int s = 0; s < inst.num_students(); ++s) total += inst.rank(s, mu[s]);
  return total;
}

}  // namespace sibmatch
