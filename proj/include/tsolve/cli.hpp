#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsolve/formats.hpp"
#include "tsolve/solvers.hpp"

namespace tsolve {

/// A loaded input file, ready for any solver.
struct Problem {
  EquationSystem sys;
  VarId start;
  /// Declaration order of finite files; absent for schemes.
  std::optional<std::vector<VarId>> vars;
  bool monotone_syntax = false;
  std::optional<Scheme> scheme;
};

Problem load_problem(std::string_view text);

/// Replaces the start variable: `name` for finite files, `point:value` for
/// schemes.
void override_start(Problem& p, const std::string& spec);

inline constexpr std::uint64_t kDefaultFuel = 100'000;

SolverResult run_solver(SolverKind kind, const Problem& p, std::uint64_t fuel = kDefaultFuel,
                        const SolverOptions& options = {});

struct CompareReport {
  std::size_t shared_vars = 0;
  std::size_t equal = 0;
  std::size_t a_more_precise = 0;  // strictly lower in the lattice
  std::size_t b_more_precise = 0;
  std::size_t incomparable = 0;
  Stats stats_a;
  Stats stats_b;
};

/// Buckets the variables bound in both assignments.
CompareReport compare_assignments(const Assignment& a, const Assignment& b);

/// Entry point of the tsolve tool; args exclude the program name. Returns
/// the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsolve
