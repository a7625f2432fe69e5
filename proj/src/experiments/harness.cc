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


#include "sibmatch/experiments/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "sibmatch/error.h"
#include "sibmatch/mechanisms.h"
#include "sibmatch/milp/formulations.h"

namespace sibmatch {
namespace {

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const std::map<std::string, Method>& Names() {
  static const std::map<std::string, Method> names = {
      {"sosm", Method::kSOSM},
      {"descending", Method::kDescending},
      {"ascending", Method::kAscending},
      {"fosm", Method::kFOSM},
      {"absolute-hard", Method::kAbsoluteHard},
      {"absolute-soft", Method::kAbsoluteSoft},
      {"partial-hard", Method::kPartialHard},
      {"partial-soft", Method::kPartialSoft},
  };
  return names;
}

void SolveModel(const Instance& inst, const LotteryProfile& lot,
                const milp::MilpModel& model, const milp::SolverConfig& cfg,
                MethodOutcome& out) {
  milp::Solution sol = milp::solve(model, cfg);
  out.status = milp::StatusName(sol.status);
  if (!sol.has_point()) return;
  bool contingent = std::any_of(
      model.vars().begin(), model.vars().end(),
      [](const milp::Variable& v) { return v.kind == milp::VarKind::kZ; });
  if (contingent) sol = milp::normalize_providers(inst, lot, model, sol);
  out.solved = true;
  out.matching = model.decode_matching(sol.values);
  out.providers = model.decode_providers(sol.values);
  out.objective = sol.objective;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string MethodSpec::name() const {
  if (method == Method::kHybrid) return "hybrid:" + std::to_string(zeta);
  for (const auto& [n, m] : Names())
    if (m == method) return n;
  return "?";
}

std::optional<MethodSpec> parse_method(const std::string& name) {
  if (name == "da") return MethodSpec{Method::kSOSM, 0};
  if (auto it = Names().find(name); it != Names().end())
    return MethodSpec{it->second, 0};
  const std::string prefix = "hybrid:";
  if (name.rfind(prefix, 0) == 0) {
    try {
      size_t used = 0;
      long long z = std::stoll(name.substr(prefix.size()), &used);
      if (used == name.size() - prefix.size() && z >= 0)
        return MethodSpec{Method::kHybrid, z};
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

MethodOutcome run_method(const Instance& inst, const LotteryProfile& lot,
                         const MethodSpec& method,
                         const milp::SolverConfig& solver, bool verify) {
  MethodOutcome out;
  auto start = std::chrono::steady_clock::now();
  try {
    switch (method.method) {
      case Method::kSOSM:
        out.matching = deferred_acceptance(inst, lot).matching;
        out.status = "HEURISTIC";
        out.solved = true;
        break;
      case Method::kDescending:
        out.matching = descending(inst, lot).matching;
        out.status = "HEURISTIC";
        out.solved = true;
        break;
      case Method::kAscending:
        out.matching = ascending(inst, lot).matching;
        out.status = "HEURISTIC";
        out.solved = true;
        break;
      case Method::kFOSM:
        SolveModel(inst, lot, milp::build_fosm(inst, lot), solver, out);
        break;
      case Method::kAbsoluteHard:
      case Method::kAbsoluteSoft:
        SolveModel(inst, lot,
                   milp::build_absolute(inst, lot,
                                        method.method == Method::kAbsoluteHard),
                   solver, out);
        break;
      case Method::kPartialHard:
      case Method::kPartialSoft:
        SolveModel(inst, lot,
                   milp::build_partial(inst, lot,
                                       method.method == Method::kPartialHard),
                   solver, out);
        break;
      case Method::kHybrid: {
        milp::MilpModel model = milp::build_absolute(inst, lot, false);
        milp::add_min_providers(model, method.zeta);
        SolveModel(inst, lot, model, solver, out);
        break;
      }
    }
    if (out.solved) {
      if (out.status == "HEURISTIC") out.objective = rank_objective(inst, out.matching);
      if (verify) {
        StabilityReport rep;
        switch (method.method) {
          case Method::kSOSM:
          case Method::kFOSM:
            rep = verify_initial_stable(inst, lot, out.matching);
            break;
          case Method::kAbsoluteHard:
          case Method::kPartialHard:
            rep = verify_contingent_stable(
                inst, lot, out.matching, nullptr,
                method.method == Method::kAbsoluteHard ? PriorityKind::kAbsolute
                                                       : PriorityKind::kPartial,
                Enforcement::kHard);
            break;
          case Method::kAbsoluteSoft:
          case Method::kPartialSoft:
          case Method::kHybrid:
            rep = verify_contingent_stable(
                inst, lot, out.matching, &out.providers,
                method.method == Method::kPartialSoft ? PriorityKind::kPartial
                                                      : PriorityKind::kAbsolute,
                Enforcement::kSoft);
            break;
          default:
            break;  // heuristics carry no stability guarantee
        }
        out.verified = rep.stable;
        if (!rep.stable) out.error = "output failed stability verification";
      }
    }
  } catch (const std::exception& e) {
    out = MethodOutcome{};
    out.status = "ERROR";
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

InstanceSource fixed_source(Instance inst) {
  return [inst = std::move(inst)](int) { return inst; };
}

InstanceSource generator_source(GeneratorConfig config) {
  return [config](int r) {
    GeneratorConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(r);
    return generate(c);
  };
}

std::uint64_t replication_seed(std::uint64_t seed, int replication,
                               TieBreakingRule rule) {
  return SplitMix(SplitMix(seed ^ SplitMix(static_cast<std::uint64_t>(replication))) +
                  static_cast<std::uint64_t>(rule));
}

ExperimentReport run_experiment(const InstanceSource& source,
                                const ExperimentConfig& config) {
  const int R = config.replications;
  const int K = static_cast<int>(config.rules.size());
  const int M = static_cast<int>(config.methods.size());
  ExperimentReport report;
  report.runs.resize(static_cast<size_t>(R) * K * M);

  auto task = [&](int idx) {
    const int r = idx / K, k = idx % K;
    const TieBreakingRule rule = config.rules[k];
    Instance inst;
    try {
      inst = source(r);
    } catch (const std::exception& e) {
      for (int m = 0; m < M; ++m) {
        RunRecord& rec = report.runs[static_cast<size_t>(idx) * M + m];
        rec.method = config.methods[m].name();
        rec.rule = rule;
        rec.replication = r;
        rec.outcome.status = "ERROR";
        rec.outcome.error = e.what();
      }
      return;
    }
    LotteryProfile lot =
        draw_lotteries(inst, rule, replication_seed(config.seed, r, rule));
    for (int m = 0; m < M; ++m) {
      RunRecord& rec = report.runs[static_cast<size_t>(idx) * M + m];
      rec.method = config.methods[m].name();
      rec.rule = rule;
      rec.replication = r;
      rec.outcome = run_method(inst, lot, config.methods[m], config.solver,
                               config.verify);
      if (rec.outcome.solved) rec.metrics = metrics(inst, rec.outcome.matching);
    }
  };

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < R * K;) task(i);
  };
  const int jobs = std::max(1, std::min(config.jobs, R * K));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (int m = 0; m < M; ++m) {
    for (int k = 0; k < K; ++k) {
      CellSummary cell;
      cell.method = config.methods[m].name();
      cell.rule = config.rules[k];
      if (config.methods[m].method == Method::kHybrid)
        cell.zeta = config.methods[m].zeta;
      std::vector<double> v[6];
      for (int r = 0; r < R; ++r) {
        const RunRecord& rec =
            report.runs[(static_cast<size_t>(r) * K + k) * M + m];
        ++cell.attempted;
        if (!rec.outcome.solved) continue;
        ++cell.solved;
        const OutcomeMetrics& x = rec.metrics;
        v[0].push_back(x.top_pref);
        v[1].push_back(x.unassigned);
        v[2].push_back(x.together);
        v[3].push_back(x.separated_none);
        v[4].push_back(x.separated_one);
        v[5].push_back(x.separated_both);
      }
      cell.top_pref = mean_se(v[0]);
      cell.unassigned = mean_se(v[1]);
      cell.together = mean_se(v[2]);
      cell.sep_none = mean_se(v[3]);
      cell.sep_one = mean_se(v[4]);
      cell.sep_both = mean_se(v[5]);
      report.cells.push_back(cell);
    }
  }
  return report;
}

ExperimentReport zeta_sweep(const InstanceSource& source,
                            const std::vector<std::int64_t>& zetas,
                            ExperimentConfig config) {
  config.methods.clear();
  for (std::int64_t z : zetas) config.methods.push_back({Method::kHybrid, z});
  return run_experiment(source, config);
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "method,rule,zeta,solved,top_pref_mean,top_pref_se,unassigned_mean,"
        "unassigned_se,together_mean,together_se,sep_none_mean,sep_none_se,"
        "sep_one_mean,sep_one_se,sep_both_mean,sep_both_se\n";
  for (const CellSummary& c : report.cells) {
    std::string method = c.zeta ? "hybrid" : c.method;
    os << method << ',' << RuleName(c.rule) << ','
       << (c.zeta ? std::to_string(*c.zeta) : "") << ',' << c.solved;
    for (const MeanSe* m : {&c.top_pref, &c.unassigned, &c.together,
                            &c.sep_none, &c.sep_one, &c.sep_both})
      os << ',' << FormatDouble(m->mean) << ',' << FormatDouble(m->se);
    os << '\n';
  }
  return os.str();
}

std::vector<std::optional<double>> paired_metric(
    const ExperimentReport& report, const std::string& method,
    TieBreakingRule rule, std::int64_t OutcomeMetrics::*field) {
  std::vector<std::optional<double>> out;
  for (const RunRecord& rec : report.runs) {
    if (rec.method != method || rec.rule != rule) continue;
    if (static_cast<int>(out.size()) <= rec.replication)
      out.resize(rec.replication + 1);
    if (rec.outcome.solved)
      out[rec.replication] = static_cast<double>(rec.metrics.*field);
  }
  return out;
}

}  // namespace sibmatch
