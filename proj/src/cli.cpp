#include "tsolve/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tsolve/error.hpp"
#include "tsolve/oracle.hpp"

namespace tsolve {

using nlohmann::json;

Problem load_problem(std::string_view text) {
  Problem p;
  if (detect_file_kind(text) == FileKind::Finite) {
    FiniteFile f = parse_finite_file(text);
    p.sys = f.sys;
    p.start = f.vars.front();
    p.vars = f.vars;
    p.monotone_syntax = f.monotone_syntax();
  } else {
    Scheme s = parse_scheme_file(text);
    p.sys = instantiate_system(s);
    p.start = s.start();
    p.scheme = std::move(s);
  }
  return p;
}

void override_start(Problem& p, const std::string& spec) {
  if (!p.scheme) {
    const VarId v(spec);
    if (std::find(p.vars->begin(), p.vars->end(), v) == p.vars->end())
      throw UsageError("unknown start variable '" + spec + "'");
    p.start = v;
    return;
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("start must be given as point:value");
  const std::string point = spec.substr(0, colon);
  if (!p.scheme->rhs.count(point)) throw UsageError("unknown start point '" + point + "'");
  Value ctx;
  try {
    ctx = p.sys.lattice->parse(spec.substr(colon + 1));
  } catch (const ParseError& e) {
    throw UsageError(std::string("bad start context: ") + e.what());
  }
  p.start = VarId(point, ctx);
}

SolverResult run_solver(SolverKind kind, const Problem& p, std::uint64_t fuel,
                        const SolverOptions& options) {
  switch (kind) {
    case SolverKind::Tsrr:
      if (!p.vars) throw UsageError("tsrr needs a finite system file");
      return tsrr(*p.vars, p.sys, options);
    case SolverKind::Tstp:
      return tstp(p.sys, p.start, options);
    case SolverKind::Tsmp:
      return tsmp(p.sys, p.start, options);
    case SolverKind::Warrow:
      return warrow_solve(p.sys, p.start, fuel, options);
  }
  throw UsageError("unknown solver");
}

CompareReport compare_assignments(const Assignment& a, const Assignment& b) {
  const Lattice& lat = *a.lattice();
  CompareReport r;
  for (const auto& [v, va] : a) {
    if (!b.contains(v)) continue;
    const Value& vb = b.at(v);
    ++r.shared_vars;
    const bool le = lat.leq(va, vb);
    const bool ge = lat.leq(vb, va);
    if (le && ge)
      ++r.equal;
    else if (le)
      ++r.a_more_precise;
    else if (ge)
      ++r.b_more_precise;
    else
      ++r.incomparable;
  }
  return r;
}

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFuel = 3;
constexpr int kExitBudget = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string status_name(Status s) {
  return s == Status::Completed ? "completed" : "fuel_exhausted";
}

json assignment_json(const Assignment& a) {
  json out = json::object();
  for (const auto& [v, d] : a) out[to_string(v, *a.lattice())] = a.lattice()->print(d);
  return out;
}

json stats_json(const Stats& s) {
  return {{"vars", s.vars_encountered},
          {"evals", s.rhs_evals},
          {"widen_apps", s.widen_apps},
          {"narrow_apps", s.narrow_apps},
          {"fuel_used", s.fuel_used}};
}

void print_assignment(std::ostream& out, const Assignment& a, const std::string& indent) {
  for (const auto& [v, d] : a)
    out << indent << to_string(v, *a.lattice()) << " = " << a.lattice()->print(d) << "\n";
}

void print_stats(std::ostream& out, const Stats& s) {
  out << "vars " << s.vars_encountered << ", evals " << s.rhs_evals << ", widen "
      << s.widen_apps << ", narrow " << s.narrow_apps;
  if (s.fuel_used) out << ", fuel " << s.fuel_used;
  out << "\n";
}

struct SolveArgs {
  std::string file;
  std::string solver;
  std::uint64_t fuel = kDefaultFuel;
  std::string start;
  bool json = false;
  std::uint64_t var_budget = 1'000'000;
};

Problem load(const SolveArgs& a) {
  Problem p = load_problem(read_file(a.file));
  if (!a.start.empty()) override_start(p, a.start);
  return p;
}

SolverKind solver_kind(const std::string& name) {
  auto k = parse_solver_kind(name);
  if (!k) throw UsageError("unknown solver '" + name + "' (tsrr, tstp, tsmp, warrow)");
  return *k;
}

SolverOptions options_of(const SolveArgs& a) {
  SolverOptions o;
  o.var_budget = a.var_budget;
  return o;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const SolverKind kind = solver_kind(a.solver);
  const Problem p = load(a);
  const SolverResult r = run_solver(kind, p, a.fuel, options_of(a));
  if (a.json) {
    json j = {{"solver", std::string(solver_name(kind))},
              {"status", status_name(r.status)},
              {"vars", r.stats.vars_encountered},
              {"evals", r.stats.rhs_evals},
              {"widen_apps", r.stats.widen_apps},
              {"narrow_apps", r.stats.narrow_apps},
              {"assignment", assignment_json(r.sigma)}};
    if (r.sigma0) j["assignment0"] = assignment_json(*r.sigma0);
    out << j.dump(2) << "\n";
  } else {
    out << "solver " << solver_name(kind) << ": " << status_name(r.status) << "\n";
    print_assignment(out, r.sigma, "  ");
    if (r.sigma0) {
      out << "widening phase:\n";
      print_assignment(out, *r.sigma0, "  ");
    }
    print_stats(out, r.stats);
  }
  return r.status == Status::Completed ? kExitOk : kExitFuel;
}

struct CompareArgs {
  SolveArgs common;
  std::string a, b;
};

int cmd_compare(const CompareArgs& c, std::ostream& out) {
  const SolverKind ka = solver_kind(c.a);
  const SolverKind kb = solver_kind(c.b);
  const Problem p = load(c.common);
  const SolverResult ra = run_solver(ka, p, c.common.fuel, options_of(c.common));
  const SolverResult rb = run_solver(kb, p, c.common.fuel, options_of(c.common));
  CompareReport rep = compare_assignments(ra.sigma, rb.sigma);
  rep.stats_a = ra.stats;
  rep.stats_b = rb.stats;
  const std::string na(solver_name(ka)), nb(solver_name(kb));
  if (c.common.json) {
    json j = {{"a", na},
              {"b", nb},
              {"status_a", status_name(ra.status)},
              {"status_b", status_name(rb.status)},
              {"shared_vars", rep.shared_vars},
              {"equal", rep.equal},
              {"a_more_precise", rep.a_more_precise},
              {"b_more_precise", rep.b_more_precise},
              {"incomparable", rep.incomparable},
              {"stats_a", stats_json(rep.stats_a)},
              {"stats_b", stats_json(rep.stats_b)}};
    out << j.dump(2) << "\n";
  } else {
    out << "shared " << rep.shared_vars << "\n"
        << "equal " << rep.equal << "\n"
        << na << " more precise " << rep.a_more_precise << "\n"
        << nb << " more precise " << rep.b_more_precise << "\n"
        << "incomparable " << rep.incomparable << "\n";
    out << na << " (" << status_name(ra.status) << "): ";
    print_stats(out, rep.stats_a);
    out << nb << " (" << status_name(rb.status) << "): ";
    print_stats(out, rep.stats_b);
  }
  const bool done = ra.status == Status::Completed && rb.status == Status::Completed;
  return done ? kExitOk : kExitFuel;
}

int cmd_check_stratified(const std::string& file, std::ostream& out) {
  const std::string text = read_file(file);
  if (detect_file_kind(text) != FileKind::Scheme)
    throw UsageError("check-stratified needs a scheme file");
  const Scheme s = parse_scheme_file(text);
  const auto result = check_stratified(s);
  if (const auto* levels = std::get_if<Levels>(&result)) {
    std::string sep;
    for (const auto& p : s.points) {
      out << sep << p << ":" << levels->at(p);
      sep = " ";
    }
    out << "\n";
    return kExitOk;
  }
  const auto& cycle = std::get<StratificationCycle>(result);
  out << "not stratified, cycle:";
  for (const auto& p : cycle.points) out << " " << p << " ->";
  out << " " << cycle.points.front() << "\n";
  return kExitFailed;
}

int cmd_verify(const SolveArgs& a, std::ostream& out) {
  const SolverKind kind = solver_kind(a.solver);
  const Problem p = load(a);
  if (!p.vars || !p.sys.lattice->is_finite())
    throw UsageError("verify needs a finite system file over a chain or powerset lattice");
  const SolverResult r = run_solver(kind, p, a.fuel, options_of(a));
  out << "solver " << solver_name(kind) << ": " << status_name(r.status) << "\n";
  if (r.status != Status::Completed) return kExitFuel;

  bool ok = true;
  auto report = [&](bool passed, bool mandatory, const std::string& what) {
    out << (passed ? "PASS " : "FAIL ") << what << (mandatory ? "" : " (informational)") << "\n";
    if (mandatory && !passed) ok = false;
  };
  const std::string primary = kind == SolverKind::Tstp ? "sigma1" : "sigma";
  report(is_closed(r.sigma, p.sys), true, primary + " closed");
  const bool orig_mandatory = kind == SolverKind::Tsrr && p.monotone_syntax;
  report(oracle::is_post_solution(r.sigma, p.sys), orig_mandatory,
         primary + " post-solution of the system");
  report(oracle::is_post_solution_lower_mono(r.sigma, p.sys, *p.vars), true,
         primary + " post-solution of the lower monotonization");
  if (r.sigma0) {
    report(is_closed(*r.sigma0, p.sys), true, "sigma0 closed");
    report(oracle::is_post_solution(*r.sigma0, p.sys), true, "sigma0 post-solution of the system");
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_fmt(const std::string& file, std::ostream& out) {
  const std::string text = read_file(file);
  if (detect_file_kind(text) == FileKind::Finite)
    out << print_finite_file(parse_finite_file(text));
  else
    out << print_scheme_file(parse_scheme_file(text));
  return kExitOk;
}

void add_solve_options(CLI::App* cmd, SolveArgs& a, bool with_solver_flag) {
  cmd->add_option("file", a.file, "system or scheme file")->required();
  if (with_solver_flag)
    cmd->add_option("--solver,-s", a.solver, "tsrr, tstp, tsmp or warrow")->required();
  cmd->add_option("--fuel", a.fuel, "evaluation budget of the warrowing solver")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--start", a.start, "start variable (name, or point:value for schemes)");
  cmd->add_option("--var-budget", a.var_budget, "maximum number of variables a solver may touch")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Terminating widening/narrowing fixpoint solvers", "tsolve"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "solve a system and print the assignment");
  add_solve_options(solve_cmd, solve, true);
  solve_cmd->add_flag("--json", solve.json, "machine-readable output");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "compare the precision of two solvers");
  add_solve_options(cmp_cmd, cmp.common, false);
  cmp_cmd->add_option("a", cmp.a, "first solver")->required();
  cmp_cmd->add_option("b", cmp.b, "second solver")->required();
  cmp_cmd->add_flag("--json", cmp.common.json, "machine-readable output");

  std::string strat_file;
  auto* strat_cmd = app.add_subcommand("check-stratified", "check a scheme for stratification");
  strat_cmd->add_option("file", strat_file, "scheme file")->required();

  SolveArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "solve, then check the result by enumeration");
  verify_cmd->add_option("file", verify.file, "finite system file")->required();
  verify_cmd->add_option("solver", verify.solver, "tsrr, tstp, tsmp or warrow")->required();
  verify_cmd->add_option("--fuel", verify.fuel, "evaluation budget of the warrowing solver");

  std::string fmt_file;
  auto* fmt_cmd = app.add_subcommand("fmt", "print a file in canonical form");
  fmt_cmd->add_option("file", fmt_file, "system or scheme file")->required();

  std::vector<std::string> argv_store{"tsolve"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "tsolve: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*cmp_cmd) return cmd_compare(cmp, out);
    if (*strat_cmd) return cmd_check_stratified(strat_file, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*fmt_cmd) return cmd_fmt(fmt_file, out);
  } catch (const BudgetExceeded& e) {
    err << "tsolve: " << e.what() << "\n";
    return kExitBudget;
  } catch (const OracleBudgetExceeded& e) {
    err << "tsolve: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "tsolve: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tsolve
