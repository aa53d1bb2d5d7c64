#pragma once

// Bookkeeping shared by the local solvers: variable interning in discovery
// order, priorities, influence sets, widening points and the priority queue.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tsolve/eqsys.hpp"
#include "tsolve/error.hpp"
#include "tsolve/solvers.hpp"

namespace tsolve::detail {

using Index = std::size_t;
using Prio = std::int64_t;

/// Priority queue with set semantics; priorities are injective, so the queue
/// is keyed by priority alone.
class PrioQueue {
 public:
  void insert(Prio p, Index i) { m_items.emplace(p, i); }
  bool empty() const { return m_items.empty(); }
  Prio min_prio() const { return m_items.begin()->first; }
  Index extract_min() {
    auto it = m_items.begin();
    Index i = it->second;
    m_items.erase(it);
    return i;
  }

 private:
  std::map<Prio, Index> m_items;
};

class LocalState {
 public:
  LocalState(const EquationSystem& sys, const SolverOptions& options)
      : sys(sys), options(options) {}

  std::optional<Index> find(const VarId& v) const {
    auto it = m_index.find(v);
    if (it == m_index.end()) return std::nullopt;
    return it->second;
  }

  /// Registers a new variable with the next (lower) priority.
  Index intern(const VarId& v) {
    if (vars.size() >= options.var_budget)
      throw BudgetExceeded("variable budget of " + std::to_string(options.var_budget) +
                           " exceeded");
    const Index i = vars.size();
    m_index.emplace(v, i);
    vars.push_back(v);
    prio.push_back(next_prio--);
    infl.emplace_back();
    point.push_back(false);
    return i;
  }

  void enqueue(Index i) { queue.insert(prio[i], i); }

  void enqueue_infl(Index y) {
    for (Index z : infl[y]) enqueue(z);
    infl[y].clear();
  }

  /// Reads point membership and clears it.
  bool take_point(Index y) {
    const bool isp = point[y];
    point[y] = false;
    return isp;
  }

  /// Records that y queried z; marks z as a point when z's priority is not
  /// below y's.
  void note_query(Index y, Index z) {
    if (prio[z] >= prio[y]) point[z] = true;
    infl[z].insert(y);
  }

  Tree rhs_of(Index y) {
    if (options.on_eval) options.on_eval(vars[y]);
    ++stats.rhs_evals;
    return sys.rhs(vars[y]);
  }

  const EquationSystem& sys;
  const SolverOptions& options;
  std::vector<VarId> vars;
  std::vector<Prio> prio;
  std::vector<std::set<Index>> infl;
  std::vector<bool> point;
  PrioQueue queue;
  Stats stats;

 private:
  std::map<VarId, Index> m_index;
  Prio next_prio = 0;
};

}  // namespace tsolve::detail
