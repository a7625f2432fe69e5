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

#ifndef SIBMATCH_INSTANCE_H_
#define SIBMATCH_INSTANCE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace sibmatch {

// Students, schools, levels and families are addressed by dense indices into
// the owning Instance. External ids only appear at the IO boundary.
using StudentIdx = int;
using SchoolIdx = int;
using LevelIdx = int;
using FamilyIdx = int;

// School index used for "unassigned".
inline constexpr SchoolIdx kUnassigned = -1;

struct StudentSpec {
  std::string id;
  std::string family;
  std::string level;
  std::vector<std::string> prefs;  // best first
};

struct SchoolSpec {
  std::string id;
  std::vector<std::pair<std::string, std::int64_t>> capacity;  // level -> q
};

struct GroupSpec {
  std::string student;
  std::string school;
  int g = 1;
};

// Unvalidated market description, as read from JSON/CSV or built in code.
struct InstanceSpec {
  std::vector<std::string> levels;  // lowest first
  std::vector<SchoolSpec> schools;
  std::vector<StudentSpec> students;
  std::vector<GroupSpec> groups;
  // 0 means "max g appearing in groups, or 1".
  int num_groups = 0;
};

struct Student {
  std::string id;
  FamilyIdx family = 0;
  LevelIdx level = 0;
  std::vector<SchoolIdx> prefs;
};

struct School {
  std::string id;
  std::vector<int> capacity;  // indexed by level
};

struct Family {
  std::string id;
  std::vector<StudentIdx> members;  // ascending index
};

// How r(s, unassigned) is defined.
enum class UnassignedPenalty { kListLengthPlusOne, kSchoolCountPlusOne };

class Instance {
 public:
  Instance() = default;

  int num_students() const { return static_cast<int>(students_.size()); }
  int num_schools() const { return static_cast<int>(schools_.size()); }
  int num_levels() const { return static_cast<int>(levels_.size()); }
  int num_families() const { return static_cast<int>(families_.size()); }
  int num_groups() const { return num_groups_; }

  const std::vector<std::string>& levels() const { return levels_; }
  const Student& student(StudentIdx s) const { return students_[s]; }
  const School& school(SchoolIdx c) const { return schools_[c]; }
  const Family& family(FamilyIdx f) const { return families_[f]; }
  const std::vector<Student>& students() const { return students_; }
  const std::vector<School>& schools() const { return schools_; }
  const std::vector<Family>& families() const { return families_; }

  const std::vector<StudentIdx>& family_of(StudentIdx s) const {
    return families_[students_[s].family].members;
  }
  const std::vector<StudentIdx>& students_at_level(LevelIdx l) const {
    return by_level_[l];
  }
  bool are_siblings(StudentIdx a, StudentIdx b) const {
    return a != b && students_[a].family == students_[b].family;
  }

  int capacity(SchoolIdx c, LevelIdx l) const {
    return schools_[c].capacity[l];
  }
  // q_c^{l(s)}.
  int capacity_for(StudentIdx s, SchoolIdx c) const {
    return schools_[c].capacity[students_[s].level];
  }

  // 1-based position of c in s's list, 0 when unlisted.
  int pref_position(StudentIdx s, SchoolIdx c) const {
    return position_[static_cast<size_t>(s) * schools_.size() + c];
  }
  bool listed(StudentIdx s, SchoolIdx c) const {
    return pref_position(s, c) > 0;
  }
  // (s,c) in V. kUnassigned is always feasible.
  bool feasible(StudentIdx s, SchoolIdx c) const {
    return c == kUnassigned || (listed(s, c) && capacity_for(s, c) > 0);
  }
  // Feasible schools of s in preference order (unassigned excluded).
  std::vector<SchoolIdx> feasible_schools(StudentIdx s) const;

  // Preference comparison with unassigned ranked after every listed school
  // and unlisted schools ranked below unassigned.
  // Smaller is better.
  int pref_key(StudentIdx s, SchoolIdx c) const;
  bool prefers(StudentIdx s, SchoolIdx a, SchoolIdx b) const {
    return pref_key(s, a) < pref_key(s, b);
  }
  bool weakly_prefers(StudentIdx s, SchoolIdx a, SchoolIdx b) const {
    return pref_key(s, a) <= pref_key(s, b);
  }

  // r_{s,c}; throws PAIR_NOT_FEASIBLE when (s,c) is not in V.
  int rank(StudentIdx s, SchoolIdx c) const;
  UnassignedPenalty penalty() const { return penalty_; }
  void set_penalty(UnassignedPenalty p) { penalty_ = p; }

  // g(s,c) in 1..num_groups().
  int group(StudentIdx s, SchoolIdx c) const {
    return groups_.empty() ? 1
                           : groups_[static_cast<size_t>(s) * schools_.size() +
                                     c];
  }

  int student_index(const std::string& id) const;  // -1 when absent
  int school_index(const std::string& id) const;   // -1 when absent
  int level_index(const std::string& id) const;    // -1 when absent

  // Copy with a different group mapping (dense, num_students x num_schools).
  Instance with_groups(std::vector<int> dense_groups, int num_groups) const;
  // Copy with different preference lists for one student.
  Instance with_prefs(StudentIdx s, std::vector<SchoolIdx> prefs) const;

  // Round-trips through validate_instance.
  InstanceSpec to_spec() const;

 private:
  friend Instance validate_instance(const InstanceSpec& spec);
  void build_derived();

  std::vector<std::string> levels_;
  std::vector<Student> students_;
  std::vector<School> schools_;
  std::vector<Family> families_;
  std::vector<std::vector<StudentIdx>> by_level_;
  std::vector<int> position_;
  std::vector<int> groups_;  // empty when |G| = 1
  int num_groups_ = 1;
  UnassignedPenalty penalty_ = UnassignedPenalty::kListLengthPlusOne;
};

// Throws Error(kValidation) listing every violation found.
Instance validate_instance(const InstanceSpec& spec);

// Assignment student -> school or kUnassigned.
using Matching = std::vector<SchoolIdx>;

// Throws Error(kInvalidMatching) when a pair is outside V or a capacity is
// exceeded.
void check_matching(const Instance& inst, const Matching& mu);
bool is_valid_matching(const Instance& inst, const Matching& mu);

// Sum of r over all students.
std::int64_t rank_objective(const Instance& inst, const Matching& mu);

}  // namespace sibmatch

#endif  // SIBMATCH_INSTANCE_H_
