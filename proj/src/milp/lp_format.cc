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

#include "sibmatch/milp/lp_format.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "sibmatch/error.h"
#include "sibmatch/io.h"

namespace sibmatch::milp {

namespace {

constexpr size_t kMaxLine = 200;

// Appends terms, wrapping long lines with a leading space.
void AppendTerms(std::string& out, std::string line,
                 const std::vector<std::pair<std::int64_t, std::string>>& terms) {
  bool first = true;
  for (const auto& [coef, name] : terms) {
    std::string piece;
    if (first) {
      piece = (coef < 0 ? "- " : "") + std::to_string(std::llabs(coef)) + " " +
              name;
    } else {
      piece = std::string(coef < 0 ? " - " : " + ") +
              std::to_string(std::llabs(coef)) + " " + name;
    }
    if (line.size() + piece.size() > kMaxLine) {
      out += line + "\n";
      line = "  ";
    }
    line += piece;
    first = false;
  }
  out += line;
}

}  // namespace

std::string to_lp_string(const MilpModel& model) {
  std::string out = "\\ sibmatch model\n";
  out += model.sense() == ObjectiveSense::kMaximize ? "Maximize\n"
                                                     : "Minimize\n";
  std::vector<std::pair<std::int64_t, std::string>> obj;
  for (const auto& v : model.vars()) {
    if (v.objective != 0) obj.emplace_back(v.objective, v.name);
  }
  if (obj.empty() && model.num_vars() > 0) obj.emplace_back(0, model.var(0).name);
  AppendTerms(out, " obj: ", obj);
  out += "\nSubject To\n";
  for (const auto& con : model.constraints()) {
    std::vector<std::pair<std::int64_t, std::string>> terms;
    for (const Term& t : con.terms) {
      terms.emplace_back(t.coef, model.var(t.var).name);
    }
    if (terms.empty() && model.num_vars() > 0) {
      terms.emplace_back(0, model.var(0).name);
    }
    AppendTerms(out, " " + con.name + ": ", terms);
    const char* op = con.sense == Sense::kLe   ? " <= "
                     : con.sense == Sense::kGe ? " >= "
                                               : " = ";
    out += op + std::to_string(con.rhs) + "\n";
  }
  out += "Binary\n";
  for (const auto& v : model.vars()) out += " " + v.name + "\n";
  out += "End\n";
  return out;
}

void export_lp(const MilpModel& model, const std::string& path) {
  write_file(path, to_lp_string(model));
}

Solution parse_solution(const MilpModel& model, const std::string& text) {
  Solution sol;
  sol.values.assign(model.num_vars(), 0);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name)) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (!(ls >> value)) {
      throw Error(ErrorCode::kIoError, where + ": missing value for " + name);
    }
    const int v = model.find(name);
    if (v < 0) throw Error(ErrorCode::kIoError, where + ": unknown variable " + name);
    double x = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || p != value.data() + value.size()) {
      throw Error(ErrorCode::kIoError, where + ": bad value " + value);
    }
    // External solvers print floats; accept values within 1e-6 of 0 or 1.
    if (std::abs(x) <= 1e-6) {
      sol.values[v] = 0;
    } else if (std::abs(x - 1) <= 1e-6) {
      sol.values[v] = 1;
    } else {
      throw Error(ErrorCode::kIoError,
                  where + ": " + name + " is not binary (" + value + ")");
    }
  }
  const int bad = model.first_violation(sol.values);
  if (bad >= 0) {
    throw Error(ErrorCode::kInfeasibleImport,
                "imported point violates " + model.constraint(bad).name,
                {model.constraint(bad).name});
  }
  sol.status = SolveStatus::kOptimal;
  sol.objective = model.objective_value(sol.values);
  return sol;
}

Solution import_solution(const MilpModel& model, const std::string& path) {
  return parse_solution(model, read_file(path));
}

}  // namespace sibmatch::milp
