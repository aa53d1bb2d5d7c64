#include <map>

#include "tsolve/error.hpp"
#include "tsolve/solvers.hpp"

namespace tsolve {

namespace {

class Tsrr {
 public:
  Tsrr(const std::vector<VarId>& vars, const EquationSystem& sys,
       const SolverOptions& options)
      : m_sys(sys), m_options(options) {
    // y_1 is the last listed variable, y_n the first.
    const std::size_t n = vars.size();
    m_vars.resize(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = n - k;
      m_vars[i] = vars[k];
      if (!m_index.emplace(vars[k], i).second)
        throw UsageError("variable listed twice: " + to_string(vars[k], lat()));
    }
    m_sigma.assign(n + 1, lat().bot());
  }

  SolverResult run() {
    solve(false, m_vars.size() - 1);
    Assignment out(m_sys.lattice);
    for (std::size_t i = 1; i < m_vars.size(); ++i) out.set(m_vars[i], m_sigma[i]);
    m_stats.vars_encountered = m_vars.size() - 1;
    return SolverResult{std::move(out), std::nullopt, m_stats, Status::Completed};
  }

 private:
  const Lattice& lat() const { return *m_sys.lattice; }

  void solve(bool b, std::size_t i) {
    while (i > 0) {
      solve(b, i - 1);
      Value tmp = evaluate(i);
      bool b2 = b;
      if (b) {
        tmp = narrow(i, tmp);
      } else if (lat().leq(tmp, m_sigma[i])) {
        tmp = narrow(i, tmp);
        b2 = true;
      } else {
        ++m_stats.widen_apps;
        tmp = lat().widen(m_sigma[i], tmp);
      }
      if (lat().eq(m_sigma[i], tmp)) return;
      m_sigma[i] = std::move(tmp);
      b = b2;  // tail call solve(b', i)
    }
  }

  Value narrow(std::size_t i, const Value& tmp) {
    ++m_stats.narrow_apps;
    return lat().narrow(m_sigma[i], tmp);
  }

  Value evaluate(std::size_t i) {
    if (m_options.on_eval) m_options.on_eval(m_vars[i]);
    ++m_stats.rhs_evals;
    return eval_tree(m_sys.rhs(m_vars[i]), [this](const VarId& z) {
      auto it = m_index.find(z);
      if (it == m_index.end())
        throw UnknownVariable("right-hand side queries unlisted variable " +
                              to_string(z, lat()));
      return m_sigma[it->second];
    });
  }

  const EquationSystem& m_sys;
  const SolverOptions& m_options;
  std::vector<VarId> m_vars;  // 1-based
  std::vector<Value> m_sigma;
  std::map<VarId, std::size_t> m_index;
  Stats m_stats;
};

}  // namespace

SolverResult tsrr(const std::vector<VarId>& vars, const EquationSystem& sys,
                  const SolverOptions& options) {
  return Tsrr(vars, sys, options).run();
}

}  // namespace tsolve
