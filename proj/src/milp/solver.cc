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

#include "sibmatch/milp/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "sibmatch/error.h"

namespace sibmatch::milp {

namespace {

using Clock = std::chrono::steady_clock;

struct Row {
  std::vector<std::pair<int, std::int64_t>> terms;  // by |coef| descending
  std::int64_t rhs = 0;
  std::int64_t max_abs = 0;
};

// All rows are normalized to sum(a x) <= b. min_act tracks the smallest
// activity still reachable given the fixed variables; a row forces every free
// variable whose |a| exceeds the slack b - min_act.
class Search {
 public:
  Search(const MilpModel& model, const SolverConfig& config)
      : model_(model), config_(config), n_(model.num_vars()) {
    const std::int64_t sign =
        model.sense() == ObjectiveSense::kMaximize ? -1 : 1;
    cost_.resize(n_);
    for (int i = 0; i < n_; ++i) cost_[i] = sign * model.var(i).objective;
    for (const auto& con : model.constraints()) {
      if (con.sense != Sense::kGe) add_row(con.terms, con.rhs, 1);
      if (con.sense != Sense::kLe) add_row(con.terms, con.rhs, -1);
    }
    // Fixing v to 1 raises min activity where a > 0; fixing to 0 where a < 0.
    raise_on_.resize(2 * static_cast<size_t>(n_));
    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
      for (const auto& [v, a] : rows_[r].terms) {
        raise_on_[2 * static_cast<size_t>(v) + (a > 0 ? 1 : 0)].push_back(
            {r, a > 0 ? a : -a});
      }
    }
    min_act_.resize(rows_.size());
    for (size_t r = 0; r < rows_.size(); ++r) {
      std::int64_t m = 0;
      for (const auto& [v, a] : rows_[r].terms) {
        if (a < 0) m += a;
      }
      min_act_[r] = m;
    }
    in_queue_.assign(rows_.size(), 0);
    val_.assign(n_, -1);
    detect_groups(model);
    group_min_.resize(groups_.size());
    for (size_t g = 0; g < groups_.size(); ++g) {
      group_min_[g] = group_min(static_cast<int>(g));
      group_sum_ += group_min_[g];
    }
    for (int v = 0; v < n_; ++v) {
      if (group_of_[v] < 0 && cost_[v] < 0) free_negative_ += cost_[v];
    }
    for (int v = 0; v < n_; ++v) {
      if (model.var(v).kind == VarKind::kZ) flags_.push_back(v);
    }
  }

  Solution run() {
    start_ = Clock::now();
    Solution sol;
    for (size_t r = 0; r < rows_.size(); ++r) enqueue(static_cast<int>(r));
    const bool ok = propagate() && probe();
    if (ok) {
      // Primal dive: provider flags at 0 first, so the first leaf tends to
      // be an initially stable matching. Stops at the first incumbent.
      diving_ = true;
      dive_budget_ = nodes_ + kDiveNodes;
      dfs();
      diving_ = false;
      if (!limit_hit_) stop_ = false;
      dfs();
    }
    sol.nodes = nodes_;
    sol.seconds =
        std::chrono::duration<double>(Clock::now() - start_).count();
    if (have_incumbent_) {
      sol.values = best_;
      sol.objective = model_.objective_value(best_);
    }
    if (limit_hit_) {
      sol.status = SolveStatus::kBoundReached;
    } else {
      sol.status =
          have_incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    }
    return sol;
  }

 private:
  void add_row(const std::vector<Term>& terms, std::int64_t rhs,
               std::int64_t sign) {
    Row row;
    row.rhs = sign * rhs;
    for (const Term& t : terms) {
      row.terms.push_back({t.var, sign * t.coef});
      row.max_abs = std::max(row.max_abs, t.coef < 0 ? -t.coef : t.coef);
    }
    std::stable_sort(row.terms.begin(), row.terms.end(),
                     [](const auto& a, const auto& b) {
                       return std::llabs(a.second) > std::llabs(b.second);
                     });
    rows_.push_back(std::move(row));
  }

  // Exactly-one rows over otherwise ungrouped variables give the bound.
  void detect_groups(const MilpModel& model) {
    group_of_.assign(n_, -1);
    for (const auto& con : model.constraints()) {
      if (con.sense != Sense::kEq || con.rhs != 1 || con.terms.empty()) continue;
      bool unit = true;
      for (const Term& t : con.terms) {
        if (t.coef != 1 || group_of_[t.var] >= 0) unit = false;
      }
      if (!unit) continue;
      std::vector<int> g;
      for (const Term& t : con.terms) {
        group_of_[t.var] = static_cast<int>(groups_.size());
        g.push_back(t.var);
      }
      // Cheapest first, so branching tries the best option first.
      std::stable_sort(g.begin(), g.end(),
                       [&](int a, int b) { return cost_[a] < cost_[b]; });
      groups_.push_back(std::move(g));
    }
  }

  void enqueue(int r) {
    if (!in_queue_[r]) {
      in_queue_[r] = 1;
      queue_.push_back(r);
    }
  }

  // Fixes v and updates activities; false on an immediate conflict.
  bool fix(int v, int x) {
    val_[v] = static_cast<signed char>(x);
    trail_.push_back(v);
    if (x == 1) fixed_cost_ += cost_[v];
    touch(v, -1);
    bool ok = true;
    for (const auto& [r, a] : raise_on_[2 * static_cast<size_t>(v) + x]) {
      min_act_[r] += a;
      const std::int64_t slack = rows_[r].rhs - min_act_[r];
      if (slack < 0) {
        ok = false;
      } else if (slack < rows_[r].max_abs) {
        enqueue(r);
      }
    }
    return ok;
  }

  void undo(size_t mark) {
    while (trail_.size() > mark) {
      const int v = trail_.back();
      trail_.pop_back();
      const int x = val_[v];
      if (x == 1) fixed_cost_ -= cost_[v];
      for (const auto& [r, a] : raise_on_[2 * static_cast<size_t>(v) + x]) {
        min_act_[r] -= a;
      }
      val_[v] = -1;
      touch(v, 1);
    }
  }

  // Keeps the bound terms in step with a change of v's state.
  void touch(int v, int freed) {
    const int g = group_of_[v];
    if (g < 0) {
      if (cost_[v] < 0) free_negative_ += freed * cost_[v];
      return;
    }
    group_sum_ -= group_min_[g];
    group_min_[g] = group_min(g);
    group_sum_ += group_min_[g];
  }

  std::int64_t group_min(int g) const {
    std::int64_t best = 0;
    bool live = false;
    for (int v : groups_[g]) {
      if (val_[v] == 1) return 0;
      if (val_[v] < 0 && (!live || cost_[v] < best)) {
        best = cost_[v];
        live = true;
      }
    }
    return best;
  }

  void clear_queue() {
    for (int r : queue_) in_queue_[r] = 0;
    queue_.clear();
  }

  bool propagate() {
    size_t head = 0;
    while (head < queue_.size()) {
      const int r = queue_[head++];
      in_queue_[r] = 0;
      const Row& row = rows_[r];
      const std::int64_t slack = row.rhs - min_act_[r];
      if (slack < 0) {
        clear_queue();
        return false;
      }
      for (const auto& [v, a] : row.terms) {
        if (std::llabs(a) <= slack) break;
        if (val_[v] >= 0) continue;
        if (!fix(v, a > 0 ? 0 : 1)) {
          clear_queue();
          return false;
        }
      }
    }
    queue_.clear();
    return true;
  }

  // Fixed cost plus the cheapest live option of each open exactly-one group
  // plus every free negative cost outside the groups.
  std::int64_t bound() const {
    return fixed_cost_ + group_sum_ + free_negative_;
  }

  bool pruned(std::int64_t lb) const {
    if (!have_incumbent_) return false;
    const double allowed =
        config_.gap * std::abs(static_cast<double>(incumbent_));
    return static_cast<double>(lb) >=
           static_cast<double>(incumbent_) - allowed;
  }

  // Failed-literal probing: a value whose propagation fails, or whose bound
  // cannot beat the incumbent, is excluded. Repeats until nothing changes.
  // False when the node itself is refuted.
  bool probe() {
    bool changed = true;
    while (changed && !stop_) {
      changed = false;
      for (int v = 0; v < n_; ++v) {
        if (val_[v] >= 0) continue;
        if (out_of_time()) return true;
        // Grouped variables only need the 1 probe: the group row forces
        // the last surviving option.
        for (int x : {1, 0}) {
          if (x == 0 && group_of_[v] >= 0) break;
          const size_t mark = trail_.size();
          bool ok = fix(v, x) && propagate();
          if (!ok) clear_queue();
          if (ok && pruned(bound())) ok = false;
          undo(mark);
          if (ok) continue;
          if (!fix(v, 1 - x) || !propagate()) {
            clear_queue();
            return false;
          }
          changed = true;
          break;
        }
      }
    }
    return true;
  }

  bool out_of_time() {
    if (nodes_ > config_.node_limit ||
        std::chrono::duration<double>(Clock::now() - start_).count() >
            config_.time_limit_seconds) {
      stop_ = true;
      limit_hit_ = true;
    }
    return stop_;
  }

  // Branch variable and preferred first value; -1 at a leaf.
  int choose(int& first_value) const {
    for (int v : diving_ ? flags_ : std::vector<int>{}) {
      if (val_[v] < 0) {
        first_value = 0;
        return v;
      }
    }
    int best_group = -1;
    int best_live = std::numeric_limits<int>::max();
    for (int gi = 0; gi < static_cast<int>(groups_.size()); ++gi) {
      int live = 0;
      bool done = false;
      for (int v : groups_[gi]) {
        if (val_[v] == 1) {
          done = true;
          break;
        }
        if (val_[v] < 0) ++live;
      }
      if (done || live == 0) continue;
      if (live < best_live) {
        best_live = live;
        best_group = gi;
      }
    }
    if (best_group >= 0) {
      for (int v : groups_[best_group]) {
        if (val_[v] < 0) {
          first_value = 1;
          return v;
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (val_[v] < 0) {
        first_value = cost_[v] > 0 ? 0 : 1;
        return v;
      }
    }
    return -1;
  }

  void dfs() {
    if (stop_) return;
    ++nodes_;
    if (diving_ && (have_incumbent_ || nodes_ > dive_budget_)) {
      stop_ = true;
      return;
    }
    if (out_of_time() || pruned(bound())) return;
    int first = 1;
    const int v = choose(first);
    if (v < 0) {
      if (!have_incumbent_ || fixed_cost_ < incumbent_) {
        have_incumbent_ = true;
        incumbent_ = fixed_cost_;
        best_.assign(val_.begin(), val_.end());
      }
      return;
    }
    for (int x : {first, 1 - first}) {
      const size_t mark = trail_.size();
      if (fix(v, x) && propagate() && probe()) {
        if (!stop_) dfs();
      } else {
        clear_queue();
      }
      undo(mark);
      if (stop_) return;
    }
  }

  const MilpModel& model_;
  const SolverConfig& config_;
  int n_;
  std::vector<std::int64_t> cost_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::pair<int, std::int64_t>>> raise_on_;
  std::vector<std::int64_t> min_act_;
  std::vector<char> in_queue_;
  std::vector<int> queue_;
  std::vector<signed char> val_;
  std::vector<int> trail_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  std::vector<int> flags_;  // provider flags, branched first while diving
  static constexpr std::int64_t kDiveNodes = 500;
  bool diving_ = false;
  std::int64_t dive_budget_ = 0;
  std::vector<int> pack_of_;
  std::vector<std::int64_t> pack_cap_;  // provider flags, branched first at value 0
  std::int64_t fixed_cost_ = 0;
  std::vector<std::int64_t> group_min_;
  std::int64_t group_sum_ = 0;
  std::int64_t free_negative_ = 0;
  bool have_incumbent_ = false;
  std::int64_t incumbent_ = 0;
  std::vector<char> best_;
  std::int64_t nodes_ = 0;
  bool stop_ = false;
  bool limit_hit_ = false;
  Clock::time_point start_;
};

}  // namespace

Solution solve(const MilpModel& model, const SolverConfig& config) {
  if (model.num_vars() > config.max_vars) {
    throw Error(ErrorCode::kModelTooLarge,
                std::to_string(model.num_vars()) +
                    " variables exceed the built-in solver bound");
  }
  if (config.gap < 0) {
    throw Error(ErrorCode::kValidation, "gap must be non-negative");
  }
  Search search(model, config);
  return search.run();
}

std::vector<Matching> enumerate_matchings_milp(MilpModel model,
                                               int num_students,
                                               const SolverConfig& config) {
  SolverConfig exact = config;
  exact.gap = 0;
  std::vector<Matching> out;
  while (true) {
    Solution sol = solve(model, exact);
    if (sol.status == SolveStatus::kBoundReached) {
      throw Error(ErrorCode::kSearchTooLarge,
                  "solver limit reached during enumeration");
    }
    if (sol.status != SolveStatus::kOptimal) break;
    Matching mu = model.decode_matching(sol.values);
    std::vector<Term> cut;
    for (int s = 0; s < num_students; ++s) cut.push_back({model.x(s, mu[s]), 1});
    model.add_constraint("nogood_" + std::to_string(out.size()), std::move(cut),
                         Sense::kLe, num_students - 1);
    out.push_back(std::move(mu));
  }
  return out;
}

}  // namespace sibmatch::milp
