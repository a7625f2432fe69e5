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

#ifndef SIBMATCH_MILP_MODEL_H_
#define SIBMATCH_MILP_MODEL_H_

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "sibmatch/instance.h"
#include "sibmatch/stability.h"

namespace sibmatch::milp {

enum class VarKind { kX, kZ, kY, kT };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kX;
  // x/z: (student, school); y: (provider, receiver, school); t: (family,
  // school). School is kUnassigned for the x of an unassigned outcome.
  int a = -1;
  int b = -1;
  int school = kUnassigned;
  std::int64_t objective = 0;
};

enum class Sense { kLe, kEq, kGe };
enum class ObjectiveSense { kMinimize, kMaximize };

struct Term {
  int var;
  std::int64_t coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  std::int64_t rhs = 0;
};

enum class SolveStatus { kOptimal, kInfeasible, kBoundReached };
const char* StatusName(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<char> values;  // one 0/1 per variable; empty when none found
  std::int64_t objective = 0;
  std::int64_t nodes = 0;
  double seconds = 0.0;

  bool has_point() const { return !values.empty(); }
};

class MilpModel {
 public:
  MilpModel() = default;
  MilpModel(int num_students, int num_schools);

  ObjectiveSense sense() const { return sense_; }
  void set_sense(ObjectiveSense s) { sense_ = s; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(cons_.size()); }
  const Variable& var(int i) const { return vars_[i]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const Constraint& constraint(int i) const { return cons_[i]; }
  const std::vector<Constraint>& constraints() const { return cons_; }

  // Throws when the name is taken.
  int add_var(Variable v);
  // Merges repeated variables and drops zero coefficients.
  int add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                     std::int64_t rhs);
  void set_objective(int var, std::int64_t coef) { vars_[var].objective = coef; }

  int find(const std::string& name) const;  // -1 when absent
  int x(StudentIdx s, SchoolIdx c) const;   // -1 when absent
  int z(StudentIdx s, SchoolIdx c) const;   // -1 when absent
  int y(StudentIdx provider, StudentIdx receiver, SchoolIdx c) const;
  int t(FamilyIdx f, SchoolIdx c) const;

  std::int64_t objective_value(const std::vector<char>& values) const;
  // Index of the first violated constraint, or -1.
  int first_violation(const std::vector<char>& values) const;

  // Student -> school read off the x variables.
  Matching decode_matching(const std::vector<char>& values) const;
  ProviderSelection decode_providers(const std::vector<char>& values) const;

 private:
  int slot(int a, SchoolIdx c) const { return a * (num_schools_ + 1) + c + 1; }

  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  int num_students_ = 0;
  int num_schools_ = 0;
  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
  std::unordered_map<std::string, int> by_name_;
  std::vector<int> x_index_;
  std::vector<int> z_index_;
  std::map<std::tuple<int, int, int>, int> y_index_;
  std::map<std::pair<int, int>, int> t_index_;
};

}  // namespace sibmatch::milp

#endif  // SIBMATCH_MILP_MODEL_H_
