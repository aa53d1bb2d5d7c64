#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tsolve/dsl.hpp"
#include "tsolve/eqsys.hpp"
#include "tsolve/lattice.hpp"

namespace tsolve::oracle {

/*
 * Brute-force ground truth for small finite systems. Everything here
 * enumerates; none of it is meant to scale.
 */

inline constexpr std::uint64_t kEnumerationBudget = 1'000'000;

/// Least solution by round-based Kleene iteration from bottom. Throws
/// NonConvergence when the iteration outlives the lattice-height bound,
/// which happens only for non-monotone right-hand sides.
Assignment kleene_least_solution(const EquationSystem& sys, const std::vector<VarId>& vars);

/// Lower monotonization of t at a: the meet of t over every assignment that
/// lies pointwise above a on vars. Variables outside vars must not be
/// queried.
Value lower_mono_value(const Tree& t, const Lookup& a, const std::vector<VarId>& vars,
                       const Lattice& lattice,
                       std::uint64_t budget = kEnumerationBudget);

bool is_post_solution(const Assignment& a, const EquationSystem& sys);

/// Post-solution check against the lower monotonization, with a extended by
/// top outside its domain.
bool is_post_solution_lower_mono(const Assignment& a, const EquationSystem& sys,
                                  const std::vector<VarId>& vars);

/// Exhaustive monotonicity check of t in the variables vars.
bool is_monotone(const Tree& t, const std::vector<VarId>& vars, const Lattice& lattice);

struct ConcreteSystem {
  std::vector<std::string> states;
  std::vector<VarId> vars;
  EquationSystem sys;  // over Powerset(states)
};

/// The two-procedure system of nested calls: u runs v twice in a row per
/// element of its own value, v applies the step relation succ. Contexts are
/// singleton state sets.
ConcreteSystem nested_call_system(const std::vector<std::string>& states,
                                  const std::vector<std::vector<std::size_t>>& succ);

/// States {q0, q1} with q0 -> q1 and q1 a dead end.
ConcreteSystem example_nested_call_system();

struct GaloisConnection {
  LatticePtr concrete;
  LatticePtr abstract;
  std::function<Value(const Value&)> alpha;
  std::function<Value(const Value&)> gamma;
  /// Finite sample of abstract values used for the adjunction check.
  std::vector<Value> abstract_samples;
};

GaloisConnection identity_connection(const LatticePtr& powerset);

/// Powerset of integer atoms abstracted by intervals: alpha is the hull,
/// gamma keeps the atoms inside the interval. Atoms must parse as integers.
GaloisConnection hull_connection(const LatticePtr& int_powerset);

/// alpha(c) <= d iff c <= gamma(d) for every concrete c and sampled d.
bool adjunction_holds(const GaloisConnection& g);

using DescriptionRelation = std::vector<std::pair<VarId, VarId>>;

/// Least concrete solution is described by the top-extended abstract
/// assignment through gamma on every related pair.
bool check_sound(const ConcreteSystem& conc, const Assignment& abs_assignment,
                 const GaloisConnection& g, const DescriptionRelation& r);

/// Every member's dependencies under sol stay in subset.
bool check_sigma_closed(const ConcreteSystem& conc, const Assignment& sol,
                        const VarSet& subset);

struct RandomSystem {
  LatticePtr lattice;
  std::vector<VarId> vars;
  std::vector<RhsExprPtr> exprs;  // parallel to vars
  EquationSystem sys;
};

/// Deterministic in its arguments. Variables are named y1..yn.
RandomSystem gen_random_system(std::uint64_t seed, std::size_t nvars,
                               const LatticeDescriptor& descriptor, std::size_t depth,
                               bool monotone_only);

}  // namespace tsolve::oracle
