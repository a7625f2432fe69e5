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

#include "sibmatch/milp/model.h"

#include <algorithm>

#include "sibmatch/error.h"

namespace sibmatch::milp {

const char* StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "OPTIMAL";
    case SolveStatus::kInfeasible:
      return "INFEASIBLE";
    case SolveStatus::kBoundReached:
      return "BOUND_REACHED";
  }
  return "?";
}

MilpModel::MilpModel(int num_students, int num_schools)
    : num_students_(num_students),
      num_schools_(num_schools),
      x_index_(static_cast<size_t>(num_students) * (num_schools + 1), -1),
      z_index_(static_cast<size_t>(num_students) * (num_schools + 1), -1) {}

int MilpModel::add_var(Variable v) {
  const int idx = static_cast<int>(vars_.size());
  if (!by_name_.emplace(v.name, idx).second) {
    throw Error(ErrorCode::kValidation, "duplicate variable name " + v.name);
  }
  // Free-standing variables (no student) are allowed and stay unindexed.
  const bool indexed = v.a >= 0 && v.a < num_students_ &&
                       v.school >= kUnassigned && v.school < num_schools_;
  switch (v.kind) {
    case VarKind::kX:
      if (indexed) x_index_[slot(v.a, v.school)] = idx;
      break;
    case VarKind::kZ:
      if (indexed) z_index_[slot(v.a, v.school)] = idx;
      break;
    case VarKind::kY:
      y_index_[{v.a, v.b, v.school}] = idx;
      break;
    case VarKind::kT:
      t_index_[{v.a, v.school}] = idx;
      break;
  }
  vars_.push_back(std::move(v));
  return idx;
}

int MilpModel::add_constraint(std::string name, std::vector<Term> terms,
                              Sense sense, std::int64_t rhs) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coef == 0; }),
               merged.end());
  cons_.push_back({std::move(name), std::move(merged), sense, rhs});
  return static_cast<int>(cons_.size()) - 1;
}

int MilpModel::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

int MilpModel::x(StudentIdx s, SchoolIdx c) const {
  return x_index_[slot(s, c)];
}

int MilpModel::z(StudentIdx s, SchoolIdx c) const {
  if (c == kUnassigned) return -1;
  return z_index_[slot(s, c)];
}

int MilpModel::y(StudentIdx provider, StudentIdx receiver, SchoolIdx c) const {
  auto it = y_index_.find({provider, receiver, c});
  return it == y_index_.end() ? -1 : it->second;
}

int MilpModel::t(FamilyIdx f, SchoolIdx c) const {
  auto it = t_index_.find({f, c});
  return it == t_index_.end() ? -1 : it->second;
}

std::int64_t MilpModel::objective_value(const std::vector<char>& values) const {
  std::int64_t total = 0;
  for (int i = 0; i < num_vars(); ++i) {
    if (values[i]) total += vars_[i].objective;
  }
  return total;
}

int MilpModel::first_violation(const std::vector<char>& values) const {
  for (int r = 0; r < num_constraints(); ++r) {
    std::int64_t lhs = 0;
    for (const Term& t : cons_[r].terms) {
      if (values[t.var]) lhs += t.coef;
    }
    const std::int64_t rhs = cons_[r].rhs;
    const bool ok = cons_[r].sense == Sense::kLe   ? lhs <= rhs
                    : cons_[r].sense == Sense::kGe ? lhs >= rhs
                                                   : lhs == rhs;
    if (!ok) return r;
  }
  return -1;
}

Matching MilpModel::decode_matching(const std::vector<char>& values) const {
  Matching mu(num_students_, kUnassigned);
  for (int i = 0; i < num_vars(); ++i) {
    if (values[i] && vars_[i].kind == VarKind::kX) mu[vars_[i].a] = vars_[i].school;
  }
  return mu;
}

ProviderSelection MilpModel::decode_providers(
    const std::vector<char>& values) const {
  ProviderSelection z;
  for (int i = 0; i < num_vars(); ++i) {
    if (values[i] && vars_[i].kind == VarKind::kZ) {
      z.emplace_back(vars_[i].a, vars_[i].school);
    }
  }
  std::sort(z.begin(), z.end());
  return z;
}

}  // namespace sibmatch::milp
