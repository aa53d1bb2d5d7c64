#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsolve/eqsys.hpp"

namespace tsolve {

struct Stats {
  std::uint64_t vars_encountered = 0;
  std::uint64_t rhs_evals = 0;
  std::uint64_t widen_apps = 0;
  std::uint64_t narrow_apps = 0;
  std::uint64_t fuel_used = 0;

  bool operator==(const Stats&) const = default;
};

enum class Status { Completed, FuelExhausted };

struct SolverResult {
  /// sigma for tsrr/tsmp/warrow, sigma_1 (narrowing phase) for tstp.
  Assignment sigma;
  /// sigma_0 (widening phase), tstp only.
  std::optional<Assignment> sigma0;
  Stats stats;
  Status status = Status::Completed;
};

struct SolverOptions {
  /// Cap on the number of distinct variables a local solver may encounter.
  std::uint64_t var_budget = 1'000'000;
  /// Called before every right-hand-side evaluation.
  std::function<void(const VarId&)> on_eval;
};

/**
 * Terminating structured round-robin iteration over a finite system.
 *
 * `vars` lists the variables from highest to lowest priority, so the last
 * entry is solved first. Throws UnknownVariable if a right-hand side queries
 * a variable outside `vars`.
 */
SolverResult tsrr(const std::vector<VarId>& vars, const EquationSystem& sys,
                  const SolverOptions& options = {});

/**
 * Terminating structured two-phase local solver, started from `start`.
 * Widening happens on sigma_0; sigma_1 is seeded from sigma_0 and refined
 * by narrowing. Throws BudgetExceeded once more than options.var_budget
 * variables are encountered.
 */
SolverResult tstp(const EquationSystem& sys, const VarId& start,
                  const SolverOptions& options = {});

/**
 * Terminating structured mixed-phase local solver. A single assignment is
 * iterated in widening mode until a variable's new value falls below its old
 * one, after which influenced lower-priority variables are narrowed.
 */
SolverResult tsmp(const EquationSystem& sys, const VarId& start,
                  const SolverOptions& options = {});

/**
 * Baseline: the tsmp iteration order without phase flags, combining old and
 * new values at widening points with warrow(). A variable that queries
 * itself counts as a point for that same evaluation. Each right-hand-side
 * evaluation costs one unit of fuel; running out yields
 * Status::FuelExhausted with the partial assignment.
 */
SolverResult warrow_solve(const EquationSystem& sys, const VarId& start,
                          std::uint64_t fuel, const SolverOptions& options = {});

enum class SolverKind { Tsrr, Tstp, Tsmp, Warrow };

std::optional<SolverKind> parse_solver_kind(std::string_view name);
std::string_view solver_name(SolverKind kind);

}  // namespace tsolve
