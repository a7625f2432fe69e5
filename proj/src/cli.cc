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


#include "sibmatch/cli.h"

#include <algorithm>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "sibmatch/error.h"
#include "sibmatch/experiments/fixtures.h"
#include "sibmatch/experiments/generator.h"
#include "sibmatch/experiments/harness.h"
#include "sibmatch/io.h"
#include "sibmatch/mechanisms.h"
#include "sibmatch/milp/formulations.h"
#include "sibmatch/milp/lp_format.h"
#include "sibmatch/milp/solver.h"
#include "sibmatch/oracle.h"
#include "sibmatch/stability.h"

namespace sibmatch {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // Input.
  std::string instance, students_csv, schools_csv, fixture, variant;
  std::string penalty = "list";
  // Lotteries.
  std::string lottery, rule;
  std::uint64_t seed = 1;
  // Models and solving.
  std::string model = "absolute";
  bool hard = false, soft = false;
  std::int64_t zeta = -1;
  std::string solver = "builtin";
  double gap = 0.001;
  double time_limit = 600.0;
  // Outputs and misc.
  std::string format = "json", out, matching, kind, method = "oracle";
  bool trace = false;
  // Experiments.
  std::string config, methods =
      "sosm,descending,ascending,fosm,absolute-hard,absolute-soft,"
      "partial-hard,partial-soft";
  std::string rules = "mtb-f", zetas = "0";
  int replications = 100, jobs = 1;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

TieBreakingRule RuleOrThrow(const std::string& name) {
  auto rule = ParseRule(name);
  if (!rule) throw UsageError("unknown rule: " + name);
  return *rule;
}

struct Loaded {
  Instance inst;
  LotteryProfile lot;
  std::optional<Fixture> fixture;
};

Instance LoadInstance(const Options& o, std::optional<Fixture>& fx) {
  const int sources = !o.instance.empty() + !o.fixture.empty() +
                      (!o.students_csv.empty() || !o.schools_csv.empty());
  if (sources != 1) {
    throw UsageError(
        "give exactly one of --instance, --fixture or --students/--schools");
  }
  Instance inst;
  if (!o.fixture.empty()) {
    fx = fixture(o.fixture);
    inst = o.variant.empty() ? fx->instance : fx->variant(o.variant);
  } else if (!o.instance.empty()) {
    inst = read_instance_json(o.instance);
  } else {
    if (o.students_csv.empty() || o.schools_csv.empty())
      throw UsageError("--students and --schools go together");
    inst = validate_instance(instance_spec_from_csv(read_file(o.students_csv),
                                                    read_file(o.schools_csv)));
  }
  if (!o.variant.empty() && o.fixture.empty())
    throw UsageError("--variant needs --fixture");
  if (o.penalty == "schools") {
    inst.set_penalty(UnassignedPenalty::kSchoolCountPlusOne);
  } else if (o.penalty != "list") {
    throw UsageError("--unassigned-penalty must be list or schools");
  }
  return inst;
}

Loaded Load(const Options& o) {
  Loaded l;
  l.inst = LoadInstance(o, l.fixture);
  if (!o.lottery.empty()) {
    l.lot = lotteries_from_csv(l.inst, read_file(o.lottery));
  } else if (l.fixture && o.rule.empty()) {
    l.lot = l.fixture->lottery;
  } else {
    l.lot = draw_lotteries(l.inst, RuleOrThrow(o.rule.empty() ? "mtb-f" : o.rule),
                           o.seed);
  }
  return l;
}

void Emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

std::string Dump(const Json& doc) { return doc.dump(2) + "\n"; }

bool Hard(const Options& o) {
  if (o.hard && o.soft) throw UsageError("--hard and --soft are exclusive");
  return !o.soft;
}

milp::SolverConfig SolverCfg(const Options& o) {
  milp::SolverConfig cfg;
  cfg.gap = o.gap;
  cfg.time_limit_seconds = o.time_limit;
  return cfg;
}

milp::MilpModel BuildModel(const Options& o, const Loaded& l) {
  const bool hard = Hard(o);
  milp::MilpModel model;
  if (o.model == "baseline") {
    model = milp::build_baseline(l.inst, l.lot);
  } else if (o.model == "absolute") {
    model = milp::build_absolute(l.inst, l.lot, hard);
  } else if (o.model == "partial") {
    model = milp::build_partial(l.inst, l.lot, hard);
  } else if (o.model == "fosm") {
    model = milp::build_fosm(l.inst, l.lot);
  } else if (o.model == "absolute-static") {
    model = milp::build_absolute_static(l.inst, l.lot, hard);
  } else {
    throw UsageError("unknown model: " + o.model);
  }
  if (o.zeta >= 0) milp::add_min_providers(model, o.zeta);
  return model;
}

bool Contingent(const std::string& model) {
  return model == "absolute" || model == "partial" || model == "absolute-static";
}

Json TraceJson(const Instance& inst, const MechanismResult& r) {
  Json trace = Json::array();
  for (const LevelTrace& t : r.per_level_trace) {
    Json groups = Json::array();
    for (const GroupEntry& e : t.groups) {
      groups.push_back({{"student", inst.student(e.student).id},
                        {"school", inst.school(e.school).id},
                        {"g", e.g}});
    }
    trace.push_back({{"level", inst.levels()[t.level]},
                     {"rounds", t.rounds},
                     {"num_groups", t.num_groups},
                     {"groups", groups}});
  }
  return trace;
}

int CmdValidate(const Options& o, std::ostream& out) {
  std::optional<Fixture> fx;
  Instance inst = LoadInstance(o, fx);
  Json doc;
  doc["valid"] = true;
  doc["students"] = inst.num_students();
  doc["schools"] = inst.num_schools();
  doc["levels"] = inst.num_levels();
  doc["families"] = inst.num_families();
  Emit(o, out, Dump(doc));
  return kExitOk;
}

int CmdLottery(const Options& o, std::ostream& out) {
  Loaded l = Load(o);
  Emit(o, out, lotteries_to_csv(l.inst, l.lot));
  return kExitOk;
}

int CmdMechanism(const Options& o, std::ostream& out, const std::string& which) {
  Loaded l = Load(o);
  MechanismResult r = which == "da"           ? deferred_acceptance(l.inst, l.lot)
                      : which == "descending" ? descending(l.inst, l.lot)
                                              : ascending(l.inst, l.lot);
  if (o.format == "csv") {
    Emit(o, out, matching_to_csv(l.inst, r.matching));
  } else {
    Json doc = matching_to_json(l.inst, r.matching);
    if (o.trace) doc["trace"] = TraceJson(l.inst, r);
    Emit(o, out, Dump(doc));
  }
  return kExitOk;
}

int CmdSolve(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = Load(o);
  milp::MilpModel model = BuildModel(o, l);
  milp::Solution sol;
  if (o.solver == "builtin") {
    sol = milp::solve(model, SolverCfg(o));
  } else if (o.solver.rfind("import:", 0) == 0) {
    sol = milp::import_solution(model, o.solver.substr(7));
  } else {
    throw UsageError("--solver must be builtin or import:<path>");
  }
  Json doc;
  doc["model"] = o.model;
  doc["status"] = milp::StatusName(sol.status);
  if (sol.status == milp::SolveStatus::kInfeasible) {
    const std::string msg = Contingent(o.model) && Hard(o)
                                ? "no contingent stable matching exists"
                                : "model is infeasible";
    doc["message"] = msg;
    err << msg << "\n";
    Emit(o, out, Dump(doc));
    return kExitInfeasible;
  }
  if (!sol.has_point()) {
    doc["message"] = "limit reached before any feasible point";
    Emit(o, out, Dump(doc));
    return kExitOk;
  }
  if (Contingent(o.model)) sol = milp::normalize_providers(l.inst, l.lot, model, sol);
  const Matching mu = model.decode_matching(sol.values);
  const ProviderSelection z = model.decode_providers(sol.values);
  if (o.format == "csv") {
    Emit(o, out, matching_to_csv(l.inst, mu));
    return kExitOk;
  }
  doc["objective"] = sol.objective;
  Json m = matching_to_json(l.inst, mu, Contingent(o.model) ? &z : nullptr);
  for (auto& [k, v] : m.items()) doc[k] = v;
  Emit(o, out, Dump(doc));
  return kExitOk;
}

int CmdVerify(const Options& o, std::ostream& out) {
  Loaded l = Load(o);
  if (o.matching.empty()) throw UsageError("verify needs --matching");
  const Json doc = Json::parse(read_file(o.matching), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kIoError, "matching is not JSON");
  PairList z;
  const Matching mu = matching_from_json(l.inst, doc, &z);
  const bool given = doc.contains("providers");
  StabilityReport rep;
  const std::string kind = o.kind.empty() ? "initial" : o.kind;
  if (kind == "initial") {
    rep = verify_initial_stable(l.inst, l.lot, mu);
  } else if (kind == "absolute" || kind == "partial") {
    const PriorityKind pk =
        kind == "absolute" ? PriorityKind::kAbsolute : PriorityKind::kPartial;
    if (Hard(o)) {
      rep = verify_contingent_stable(l.inst, l.lot, mu, given ? &z : nullptr, pk,
                                     Enforcement::kHard);
    } else {
      if (!given) z = soft_stability_exists(l.inst, l.lot, mu, pk).witness;
      rep = verify_contingent_stable(l.inst, l.lot, mu, &z, pk, Enforcement::kSoft);
    }
  } else {
    throw UsageError("--kind must be initial, absolute or partial");
  }
  Emit(o, out, Dump(report_to_json(l.inst, rep)));
  return rep.stable ? kExitOk : kExitFailure;
}

int CmdEnumerate(const Options& o, std::ostream& out) {
  Loaded l = Load(o);
  const auto kind = ParseStableKind(o.kind.empty() ? "initial" : o.kind);
  if (!kind) throw UsageError("unknown --kind " + o.kind);
  std::vector<StableMember> members;
  if (o.method == "oracle") {
    members = stable_set(l.inst, l.lot, *kind).members;
  } else if (o.method == "milp") {
    milp::MilpModel model;
    switch (*kind) {
      case StableKind::kInitial:
        model = milp::build_baseline(l.inst, l.lot);
        break;
      case StableKind::kAbsoluteHard:
      case StableKind::kAbsoluteSoft:
        model = milp::build_absolute(l.inst, l.lot, *kind == StableKind::kAbsoluteHard);
        break;
      default:
        model = milp::build_partial(l.inst, l.lot, *kind == StableKind::kPartialHard);
    }
    for (Matching& mu : milp::enumerate_matchings_milp(model, l.inst.num_students(),
                                                       SolverCfg(o))) {
      StableMember m;
      m.objective = rank_objective(l.inst, mu);
      if (*kind == StableKind::kAbsoluteHard || *kind == StableKind::kPartialHard) {
        m.z = effective_providers_hard(l.inst, l.lot, mu);
      } else if (*kind != StableKind::kInitial) {
        m.z = soft_stability_exists(l.inst, l.lot, mu,
                                    *kind == StableKind::kAbsoluteSoft
                                        ? PriorityKind::kAbsolute
                                        : PriorityKind::kPartial)
                  .witness;
      }
      m.matching = std::move(mu);
      members.push_back(std::move(m));
    }
    std::sort(members.begin(), members.end(), [&](const auto& a, const auto& b) {
      return matching_signature(l.inst, a.matching) <
             matching_signature(l.inst, b.matching);
    });
  } else {
    throw UsageError("--method must be oracle or milp");
  }
  std::string text;
  for (const StableMember& m : members) {
    Json line;
    line["objective"] = m.objective;
    Json body = matching_to_json(l.inst, m.matching,
                                 *kind == StableKind::kInitial ? nullptr : &m.z);
    for (auto& [k, v] : body.items()) line[k] = v;
    text += line.dump() + "\n";
  }
  Emit(o, out, text);
  return kExitOk;
}

ExperimentConfig ExperimentCfg(const Options& o) {
  ExperimentConfig cfg;
  cfg.methods.clear();
  for (const std::string& name : SplitList(o.methods)) {
    auto m = parse_method(name);
    if (!m) throw UsageError("unknown method: " + name);
    cfg.methods.push_back(*m);
  }
  cfg.rules.clear();
  for (const std::string& name : SplitList(o.rules)) cfg.rules.push_back(RuleOrThrow(name));
  if (cfg.rules.empty()) throw UsageError("--rules is empty");
  if (o.replications <= 0) throw UsageError("--replications must be positive");
  cfg.replications = o.replications;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.solver = SolverCfg(o);
  return cfg;
}

InstanceSource Source(const Options& o) {
  if (!o.config.empty()) {
    const Json doc = Json::parse(read_file(o.config), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::kIoError, "config is not JSON");
    return generator_source(generator_config_from_json(doc));
  }
  std::optional<Fixture> fx;
  return fixed_source(LoadInstance(o, fx));
}

Json ReportJson(const ExperimentReport& r) {
  Json cells = Json::array();
  for (const CellSummary& c : r.cells) {
    Json cell;
    cell["method"] = c.method;
    cell["rule"] = RuleName(c.rule);
    if (c.zeta) cell["zeta"] = *c.zeta;
    cell["attempted"] = c.attempted;
    cell["solved"] = c.solved;
    const std::pair<const char*, const MeanSe*> ms[] = {
        {"top_pref", &c.top_pref}, {"unassigned", &c.unassigned},
        {"together", &c.together}, {"sep_none", &c.sep_none},
        {"sep_one", &c.sep_one},   {"sep_both", &c.sep_both}};
    for (const auto& [name, m] : ms) cell[name] = {{"mean", m->mean}, {"se", m->se}};
    cells.push_back(cell);
  }
  return cells;
}

int CmdExperiment(const Options& o, std::ostream& out, bool sweep, bool json) {
  ExperimentConfig cfg = ExperimentCfg(o);
  InstanceSource source = Source(o);
  ExperimentReport rep;
  if (sweep) {
    std::vector<std::int64_t> zetas;
    for (const std::string& z : SplitList(o.zetas)) {
      try {
        zetas.push_back(std::stoll(z));
      } catch (const std::exception&) {
        throw UsageError("bad zeta: " + z);
      }
    }
    rep = zeta_sweep(source, zetas, cfg);
  } else {
    rep = run_experiment(source, cfg);
  }
  Emit(o, out, json ? Dump(ReportJson(rep)) : report_to_csv(rep));
  return kExitOk;
}

int CmdExportLp(const Options& o, std::ostream& out) {
  Loaded l = Load(o);
  Emit(o, out, milp::to_lp_string(BuildModel(o, l)));
  return kExitOk;
}

int CmdFixtures(const Options& o, std::ostream& out) {
  if (o.fixture.empty()) {
    std::string text;
    for (const std::string& n : fixture_names()) text += n + "\n";
    Emit(o, out, text);
    return kExitOk;
  }
  const Fixture fx = fixture(o.fixture);
  Json doc;
  doc["name"] = fx.name;
  doc["description"] = fx.description;
  doc["instance"] = instance_to_json(fx.instance);
  doc["lotteries"] = lotteries_to_csv(fx.instance, fx.lottery);
  Json ms = Json::object();
  for (const auto& [k, mu] : fx.matchings) ms[k] = matching_to_json(fx.instance, mu);
  doc["matchings"] = ms;
  Json vs = Json::object();
  for (const auto& [k, inst] : fx.variants) vs[k] = instance_to_json(inst);
  doc["variants"] = vs;
  Emit(o, out, Dump(doc));
  return kExitOk;
}

void AddInput(CLI::App* cmd, Options& o) {
  cmd->add_option("--instance", o.instance, "instance JSON file");
  cmd->add_option("--students", o.students_csv, "students CSV (id,family,level,pref1..)");
  cmd->add_option("--schools", o.schools_csv, "schools CSV (id,level,capacity)");
  cmd->add_option("--fixture", o.fixture, "named built-in instance");
  cmd->add_option("--variant", o.variant, "preference variant of the fixture");
  cmd->add_option("--unassigned-penalty", o.penalty,
                  "rank of being unassigned: list (|prefs|+1) or schools (|C|+1)");
}

void AddLottery(CLI::App* cmd, Options& o) {
  cmd->add_option("--lottery", o.lottery,
                  "lotteries CSV (student,school,family_draw,member_draw)");
  cmd->add_option("--rule", o.rule, "tie-breaking rule: stb, mtb, stb-f, mtb-f");
  cmd->add_option("--seed", o.seed, "lottery seed");
}

void AddModel(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model,
                  "baseline, absolute, partial, fosm or absolute-static");
  cmd->add_flag("--hard", o.hard, "every effective provider grants priority (default)");
  cmd->add_flag("--soft", o.soft, "providers are chosen by the clearinghouse");
  cmd->add_option("--zeta", o.zeta, "minimum number of effective providers");
}

void AddSolver(CLI::App* cmd, Options& o) {
  cmd->add_option("--solver", o.solver, "builtin or import:<solution file>");
  cmd->add_option("--gap", o.gap, "relative optimality gap");
  cmd->add_option("--time-limit", o.time_limit, "seconds per solve");
}

void AddFormat(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out, "write to this file instead of stdout");
}

constexpr const char* kSchemas = R"(Formats:
  instance JSON  {"levels":[..],"schools":[{"id","capacity":{level:int}}],
                  "students":[{"id","family","level","prefs":[school ids]}],
                  "groups":[{"student","school","g"}] (optional)}
  students.csv   id,family,level,pref1..prefK
  schools.csv    id,level,capacity
  lotteries.csv  student,school,family_draw,member_draw
  matching JSON  {"assignments":[{"student","school"|null}],
                  "providers":[{"student","school"}] (optional)}
  solution file  one "variable value" pair per line, '#' starts a comment
  report CSV     method,rule,zeta,solved,<metric>_mean,<metric>_se for
                 top_pref, unassigned, together, sep_none, sep_one, sep_both
Exit codes: 0 ok, 2 infeasible, 3 validation or verification failure, 4 usage.
)";

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Options o;
  CLI::App app{"School choice with sibling priorities"};
  app.footer(kSchemas);
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check an instance");
  AddInput(validate, o);
  AddFormat(validate, o);

  auto* lottery = app.add_subcommand("lottery", "draw lotteries as CSV");
  AddInput(lottery, o);
  AddLottery(lottery, o);
  AddFormat(lottery, o);

  std::vector<CLI::App*> mechs;
  for (const char* name : {"da", "descending", "ascending"}) {
    auto* cmd = app.add_subcommand(name, std::string("run ") + name);
    AddInput(cmd, o);
    AddLottery(cmd, o);
    AddFormat(cmd, o);
    cmd->add_flag("--trace", o.trace, "include per-level rounds and groups");
    mechs.push_back(cmd);
  }

  auto* solve = app.add_subcommand("solve", "solve an integer model");
  AddInput(solve, o);
  AddLottery(solve, o);
  AddModel(solve, o);
  AddSolver(solve, o);
  AddFormat(solve, o);

  auto* verify = app.add_subcommand("verify", "check a matching for stability");
  AddInput(verify, o);
  AddLottery(verify, o);
  AddFormat(verify, o);
  verify->add_option("--matching", o.matching, "matching JSON file")->required();
  verify->add_option("--kind", o.kind, "initial, absolute or partial");
  verify->add_flag("--hard", o.hard, "hard providers (default)");
  verify->add_flag("--soft", o.soft, "providers from the file or searched");

  auto* enumerate = app.add_subcommand("enumerate", "list stable matchings as JSON lines");
  AddInput(enumerate, o);
  AddLottery(enumerate, o);
  AddSolver(enumerate, o);
  enumerate->add_option("--kind", o.kind,
                        "initial, absolute-hard, absolute-soft, partial-hard, partial-soft");
  enumerate->add_option("--method", o.method, "oracle or milp");
  enumerate->add_option("--out", o.out, "write to this file instead of stdout");

  CLI::App* exps[2];
  exps[0] = app.add_subcommand("experiment", "Monte-Carlo comparison of methods");
  exps[1] = app.add_subcommand("zeta-sweep", "hybrid model over minimum provider counts");
  for (CLI::App* cmd : exps) {
    AddInput(cmd, o);
    AddSolver(cmd, o);
    AddFormat(cmd, o);
    cmd->add_option("--config", o.config, "generator config JSON");
    cmd->add_option("--rules", o.rules, "comma-separated tie-breaking rules");
    cmd->add_option("--replications", o.replications, "lottery draws per rule");
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--jobs", o.jobs, "worker threads");
  }
  exps[0]->add_option("--methods", o.methods,
                      "comma-separated: sosm, descending, ascending, fosm, "
                      "absolute-hard, absolute-soft, partial-hard, partial-soft, "
                      "hybrid:<zeta>");
  exps[1]->add_option("--zetas", o.zetas, "comma-separated zeta values");

  auto* export_lp = app.add_subcommand("export-lp", "write the model in LP format");
  AddInput(export_lp, o);
  AddLottery(export_lp, o);
  AddModel(export_lp, o);
  export_lp->add_option("--out", o.out, "write to this file instead of stdout");

  auto* fixtures = app.add_subcommand("fixtures", "list or show built-in instances");
  fixtures->add_option("--fixture,--name", o.fixture, "fixture to show");
  fixtures->add_option("--out", o.out, "write to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return CmdValidate(o, out);
    if (lottery->parsed()) return CmdLottery(o, out);
    for (CLI::App* cmd : mechs) {
      if (cmd->parsed()) return CmdMechanism(o, out, cmd->get_name());
    }
    if (solve->parsed()) return CmdSolve(o, out, err);
    if (verify->parsed()) return CmdVerify(o, out);
    if (enumerate->parsed()) return CmdEnumerate(o, out);
    // Reports default to CSV.
    for (int k = 0; k < 2; ++k) {
      if (exps[k]->parsed()) {
        const bool json = exps[k]->count("--format") > 0 && o.format == "json";
        return CmdExperiment(o, out, k == 1, json);
      }
    }
    if (export_lp->parsed()) return CmdExportLp(o, out);
    if (fixtures->parsed()) return CmdFixtures(o, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    for (const std::string& d : e.details()) err << "  " << d << "\n";
    return e.code() == ErrorCode::kUnknownFixture ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sibmatch
