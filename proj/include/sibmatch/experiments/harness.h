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


#ifndef SIBMATCH_EXPERIMENTS_HARNESS_H_
#define SIBMATCH_EXPERIMENTS_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sibmatch/experiments/generator.h"
#include "sibmatch/experiments/metrics.h"
#include "sibmatch/experiments/stats.h"
#include "sibmatch/instance.h"
#include "sibmatch/lottery.h"
#include "sibmatch/milp/solver.h"
#include "sibmatch/stability.h"

namespace sibmatch {

enum class Method {
  kSOSM,
  kDescending,
  kAscending,
  kFOSM,
  kAbsoluteHard,
  kAbsoluteSoft,
  kPartialHard,
  kPartialSoft,
  kHybrid,  // absolute-soft with at least zeta effective providers
};

struct MethodSpec {
  Method method = Method::kSOSM;
  std::int64_t zeta = 0;

  // "sosm", "descending", ..., "hybrid:<zeta>".
  std::string name() const;
};

// Accepts the names produced by MethodSpec::name and "da" for SOSM.
std::optional<MethodSpec> parse_method(const std::string& name);

struct MethodOutcome {
  bool solved = false;
  std::string status;  // OPTIMAL, INFEASIBLE, BOUND_REACHED, HEURISTIC, ERROR
  Matching matching;
  ProviderSelection providers;
  std::int64_t objective = 0;
  bool verified = false;
  std::string error;
  double seconds = 0.0;
};

// Runs one method on one lottery draw. Errors are captured in the outcome.
MethodOutcome run_method(const Instance& inst, const LotteryProfile& lot,
                         const MethodSpec& method,
                         const milp::SolverConfig& solver = {},
                         bool verify = true);

using InstanceSource = std::function<Instance(int replication)>;

InstanceSource fixed_source(Instance inst);
// Replication r uses seed config.seed + r.
InstanceSource generator_source(GeneratorConfig config);

struct ExperimentConfig {
  std::vector<MethodSpec> methods;
  std::vector<TieBreakingRule> rules = {TieBreakingRule::kMTBF};
  int replications = 100;
  std::uint64_t seed = 1;
  milp::SolverConfig solver;
  int jobs = 1;
  bool verify = true;
};

struct RunRecord {
  std::string method;
  TieBreakingRule rule = TieBreakingRule::kMTBF;
  int replication = 0;
  MethodOutcome outcome;
  OutcomeMetrics metrics;  // zero when unsolved
};

struct CellSummary {
  std::string method;
  TieBreakingRule rule = TieBreakingRule::kMTBF;
  std::optional<std::int64_t> zeta;
  int attempted = 0;
  int solved = 0;
  MeanSe top_pref, unassigned, together, sep_none, sep_one, sep_both;
};

struct ExperimentReport {
  std::vector<CellSummary> cells;  // methods x rules, config order
  std::vector<RunRecord> runs;     // replication-major, then rule, method
};

// Lottery seed for one replication under one rule.
std::uint64_t replication_seed(std::uint64_t seed, int replication,
                               TieBreakingRule rule);

ExperimentReport run_experiment(const InstanceSource& source,
                                const ExperimentConfig& config);

// run_experiment over hybrid(zeta) for each zeta; config.methods is ignored.
ExperimentReport zeta_sweep(const InstanceSource& source,
                            const std::vector<std::int64_t>& zetas,
                            ExperimentConfig config);

std::string report_to_csv(const ExperimentReport& report);

// Per-replication values of one metric for a cell; nullopt when unsolved.
std::vector<std::optional<double>> paired_metric(
    const ExperimentReport& report, const std::string& method,
    TieBreakingRule rule, std::int64_t OutcomeMetrics::*field);

}  // namespace sibmatch

#endif  // SIBMATCH_EXPERIMENTS_HARNESS_H_
