#pragma once

// Line-by-line recursive transcriptions of the solver pseudocode, kept
// deliberately naive (maps keyed by variable, real recursion, tail calls as
// calls). Used only to cross-check the library's evaluation order, counts
// and results.

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "tsolve/eqsys.hpp"

namespace reference {

using namespace tsolve;

struct Run {
  std::map<VarId, Value> sigma;   // sigma, or sigma_1 for the two-phase solver
  std::map<VarId, Value> sigma0;  // two-phase solver only
  std::vector<VarId> evals;       // every rhs evaluation, in order
  bool out_of_fuel = false;
};

class LocalBase {
 protected:
  explicit LocalBase(const EquationSystem& sys) : sys(sys), lat(*sys.lattice) {}

  int next_prio() { return m_next--; }

  void insert(const VarId& z) { queue.insert({prio.at(z), z}); }
  int min_prio() const { return queue.begin()->first; }
  VarId extract_min() {
    VarId y = queue.begin()->second;
    queue.erase(queue.begin());
    return y;
  }

  const EquationSystem& sys;
  const Lattice& lat;
  std::map<VarId, int> prio;
  std::map<VarId, std::set<VarId>> infl;
  std::set<VarId> point;
  std::set<std::pair<int, VarId>> queue;
  Run run;

 private:
  int m_next = 0;
};

class Tsmp : LocalBase {
 public:
  explicit Tsmp(const EquationSystem& sys) : LocalBase(sys) {}

  Run operator()(const VarId& start) {
    solve(start);
    return run;
  }

 private:
  void iterate(bool b, int n) {
    if (!queue.empty() && min_prio() <= n) {
      VarId y = extract_min();
      bool b2 = do_var(b, y);
      int n2 = prio.at(y);
      if (b != b2 && n > n2) {
        iterate(b2, n2);
        iterate(b, n);
      } else {
        iterate(b2, n);
      }
    }
  }

  void solve(const VarId& y) {
    if (dom.count(y)) return;
    dom.insert(y);
    prio[y] = next_prio();
    run.sigma[y] = lat.bot();
    infl[y] = {};
    bool b2 = do_var(false, y);
    iterate(b2, prio.at(y));
  }

  bool do_var(bool b, const VarId& y) {
    bool isp = point.count(y) != 0;
    point.erase(y);
    Lookup eval = [&](const VarId& z) {
      solve(z);
      if (prio.at(z) >= prio.at(y)) point.insert(z);
      infl[z].insert(y);
      return run.sigma.at(z);
    };
    run.evals.push_back(y);
    Value tmp = eval_tree(sys.rhs(y), eval);
    bool b2 = b;
    if (isp) {
      if (b) {
        tmp = lat.narrow(run.sigma.at(y), tmp);
      } else if (lat.leq(tmp, run.sigma.at(y))) {
        tmp = lat.narrow(run.sigma.at(y), tmp);
        b2 = true;
      } else {
        tmp = lat.widen(run.sigma.at(y), tmp);
      }
    }
    if (lat.eq(run.sigma.at(y), tmp)) return true;
    run.sigma[y] = tmp;
    for (const auto& z : infl[y]) insert(z);
    infl[y] = {};
    return b2;
  }

  std::set<VarId> dom;
};

class Tstp : LocalBase {
 public:
  explicit Tstp(const EquationSystem& sys) : LocalBase(sys) {}

  Run operator()(const VarId& start) {
    solve1(start, 0);
    return run;
  }

 private:
  void iterate0(int n) {
    if (!queue.empty() && min_prio() <= n) {
      VarId y = extract_min();
      do_var0(y);
      iterate0(n);
    }
  }

  void solve0(const VarId& y) {
    if (dom0.count(y)) return;
    dom0.insert(y);
    prio[y] = next_prio();
    run.sigma0[y] = lat.bot();
    infl[y] = {};
    do_var0(y);
    iterate0(prio.at(y));
  }

  void iterate1(int n) {
    if (!queue.empty() && min_prio() <= n) {
      VarId y = extract_min();
      solve1(y, prio.at(y) - 1);
      do_var1(y);
      iterate1(n);
    }
  }

  void solve1(const VarId& y, int n) {
    if (dom1.count(y)) return;
    solve0(y);
    dom1.insert(y);
    run.sigma[y] = run.sigma0.at(y);
    insert(y);
    for (const auto& z : infl[y]) insert(z);
    infl[y] = {};
    iterate1(n);
  }

  void do_var0(const VarId& y) {
    bool isp = point.count(y) != 0;
    point.erase(y);
    Lookup eval = [&](const VarId& z) {
      solve0(z);
      if (prio.at(z) >= prio.at(y)) point.insert(z);
      infl[z].insert(y);
      return run.sigma0.at(z);
    };
    run.evals.push_back(y);
    Value tmp = eval_tree(sys.rhs(y), eval);
    if (isp) tmp = lat.widen(run.sigma0.at(y), tmp);
    if (lat.eq(run.sigma0.at(y), tmp)) return;
    run.sigma0[y] = tmp;
    for (const auto& z : infl[y]) insert(z);
    infl[y] = {};
  }

  void do_var1(const VarId& y) {
    bool isp = point.count(y) != 0;
    point.erase(y);
    Lookup eval = [&](const VarId& z) {
      solve1(z, prio.at(y) - 1);
      if (prio.at(z) >= prio.at(y)) point.insert(z);
      infl[z].insert(y);
      return run.sigma.at(z);
    };
    run.evals.push_back(y);
    Value tmp = eval_tree(sys.rhs(y), eval);
    if (isp) tmp = lat.narrow(run.sigma.at(y), tmp);
    if (lat.eq(run.sigma.at(y), tmp)) return;
    run.sigma[y] = tmp;
    for (const auto& z : infl[y]) insert(z);
    infl[y] = {};
  }

  std::set<VarId> dom0, dom1;
};

// Mixed-phase skeleton without flags; points are sampled after evaluating.
class Warrow : LocalBase {
 public:
  Warrow(const EquationSystem& sys, std::uint64_t fuel) : LocalBase(sys), m_fuel(fuel) {}

  Run operator()(const VarId& start) {
    try {
      solve(start);
    } catch (const OutOfFuel&) {
      run.out_of_fuel = true;
    }
    return run;
  }

 private:
  struct OutOfFuel {};

  void iterate(int n) {
    if (!queue.empty() && min_prio() <= n) {
      VarId y = extract_min();
      do_var(y);
      iterate(n);
    }
  }

  void solve(const VarId& y) {
    if (dom.count(y)) return;
    dom.insert(y);
    prio[y] = next_prio();
    run.sigma[y] = lat.bot();
    infl[y] = {};
    do_var(y);
    iterate(prio.at(y));
  }

  void do_var(const VarId& y) {
    if (run.evals.size() >= m_fuel) throw OutOfFuel{};
    bool isp = point.count(y) != 0;
    point.erase(y);
    Lookup eval = [&](const VarId& z) {
      solve(z);
      if (prio.at(z) >= prio.at(y)) point.insert(z);
      infl[z].insert(y);
      return run.sigma.at(z);
    };
    run.evals.push_back(y);
    Value tmp = eval_tree(sys.rhs(y), eval);
    if (point.count(y)) {
      isp = true;
      point.erase(y);
    }
    if (isp) tmp = lat.warrow(run.sigma.at(y), tmp);
    if (lat.eq(run.sigma.at(y), tmp)) return;
    run.sigma[y] = tmp;
    for (const auto& z : infl[y]) insert(z);
    infl[y] = {};
  }

  std::set<VarId> dom;
  std::uint64_t m_fuel;
};

// Round robin over y_1..y_n, where y_i = vars[n - i].
class Tsrr {
 public:
  Tsrr(const EquationSystem& sys, std::vector<VarId> vars)
      : sys(sys), lat(*sys.lattice), vars(std::move(vars)) {}

  Run operator()() {
    for (const auto& v : vars) run.sigma[v] = lat.bot();
    solve(false, static_cast<int>(vars.size()));
    return run;
  }

 private:
  const VarId& y(int i) const { return vars[vars.size() - static_cast<std::size_t>(i)]; }

  void solve(bool b, int i) {
    if (i <= 0) return;
    solve(b, i - 1);
    run.evals.push_back(y(i));
    Value tmp = eval_tree(sys.rhs(y(i)), [&](const VarId& z) { return run.sigma.at(z); });
    bool b2 = b;
    const Value& old = run.sigma.at(y(i));
    if (b) {
      tmp = lat.narrow(old, tmp);
    } else if (lat.leq(tmp, old)) {
      tmp = lat.narrow(old, tmp);
      b2 = true;
    } else {
      tmp = lat.widen(old, tmp);
    }
    if (lat.eq(old, tmp)) return;
    run.sigma[y(i)] = tmp;
    solve(b2, i);
  }

  const EquationSystem& sys;
  const Lattice& lat;
  std::vector<VarId> vars;
  Run run;
};

}  // namespace reference
