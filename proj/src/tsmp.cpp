#include "local_state.hpp"

namespace tsolve {

namespace {

using detail::Index;
using detail::LocalState;
using detail::Prio;

struct OutOfFuel {};

Assignment collect(const LocalState& st, const std::vector<Value>& sigma) {
  Assignment out(st.sys.lattice);
  for (Index i = 0; i < st.vars.size(); ++i) out.set(st.vars[i], sigma[i]);
  return out;
}

class Tsmp {
 public:
  Tsmp(const EquationSystem& sys, const SolverOptions& options) : m_st(sys, options) {}

  SolverResult run(const VarId& start) {
    solve(start);
    SolverResult r{collect(m_st, m_sigma), std::nullopt, m_st.stats, Status::Completed};
    r.stats.vars_encountered = m_st.vars.size();
    return r;
  }

 private:
  const Lattice& lat() const { return *m_st.sys.lattice; }

  Index solve(const VarId& v) {
    if (auto i = m_st.find(v)) return *i;
    const Index y = m_st.intern(v);
    m_sigma.push_back(lat().bot());
    const bool b = do_var(false, y);
    iterate(b, m_st.prio[y]);
    return y;
  }

  void iterate(bool b, Prio n) {
    while (!m_st.queue.empty() && m_st.queue.min_prio() <= n) {
      const Index y = m_st.queue.extract_min();
      const bool b2 = do_var(b, y);
      const Prio n2 = m_st.prio[y];
      if (b != b2 && n > n2) {
        iterate(b2, n2);
        // followed by iterate(b, n): keep looping with the same flag
      } else {
        b = b2;
      }
    }
  }

  bool do_var(bool b, Index y) {
    const bool isp = m_st.take_point(y);
    Lookup eval = [this, y](const VarId& z) {
      const Index zi = solve(z);
      m_st.note_query(y, zi);
      return m_sigma[zi];
    };
    Value tmp = eval_tree(m_st.rhs_of(y), eval);
    bool b2 = b;
    if (isp) {
      if (b) {
        tmp = narrow(y, tmp);
      } else if (lat().leq(tmp, m_sigma[y])) {
        tmp = narrow(y, tmp);
        b2 = true;
      } else {
        tmp = widen(y, tmp);
      }
    }
    if (lat().eq(m_sigma[y], tmp)) return true;
    m_sigma[y] = std::move(tmp);
    m_st.enqueue_infl(y);
    return b2;
  }

  Value narrow(Index y, const Value& tmp) {
    ++m_st.stats.narrow_apps;
    return lat().narrow(m_sigma[y], tmp);
  }

  Value widen(Index y, const Value& tmp) {
    ++m_st.stats.widen_apps;
    return lat().widen(m_sigma[y], tmp);
  }

  LocalState m_st;
  std::vector<Value> m_sigma;
};

class Warrow {
 public:
  Warrow(const EquationSystem& sys, std::uint64_t fuel, const SolverOptions& options)
      : m_st(sys, options), m_fuel(fuel) {}

  SolverResult run(const VarId& start) {
    Status status = Status::Completed;
    try {
      solve(start);
    } catch (const OutOfFuel&) {
      status = Status::FuelExhausted;
    }
    SolverResult r{collect(m_st, m_sigma), std::nullopt, m_st.stats, status};
    r.stats.vars_encountered = m_st.vars.size();
    return r;
  }

 private:
  const Lattice& lat() const { return *m_st.sys.lattice; }

  Index solve(const VarId& v) {
    if (auto i = m_st.find(v)) return *i;
    const Index y = m_st.intern(v);
    m_sigma.push_back(lat().bot());
    do_var(y);
    iterate(m_st.prio[y]);
    return y;
  }

  void iterate(Prio n) {
    while (!m_st.queue.empty() && m_st.queue.min_prio() <= n)
      do_var(m_st.queue.extract_min());
  }

  void do_var(Index y) {
    if (m_st.stats.fuel_used >= m_fuel) throw OutOfFuel{};
    ++m_st.stats.fuel_used;
    const bool was_point = m_st.take_point(y);
    Lookup eval = [this, y](const VarId& z) {
      const Index zi = solve(z);
      m_st.note_query(y, zi);
      return m_sigma[zi];
    };
    Value tmp = eval_tree(m_st.rhs_of(y), eval);
    // A self-query during this evaluation makes y a point right away.
    const bool isp = m_st.take_point(y) || was_point;
    if (isp) {
      if (lat().leq(tmp, m_sigma[y]))
        ++m_st.stats.narrow_apps;
      else
        ++m_st.stats.widen_apps;
      tmp = lat().warrow(m_sigma[y], tmp);
    }
    if (lat().eq(m_sigma[y], tmp)) return;
    m_sigma[y] = std::move(tmp);
    m_st.enqueue_infl(y);
  }

  LocalState m_st;
  std::vector<Value> m_sigma;
  std::uint64_t m_fuel;
};

}  // namespace

SolverResult tsmp(const EquationSystem& sys, const VarId& start,
                  const SolverOptions& options) {
  return Tsmp(sys, options).run(start);
}

SolverResult warrow_solve(const EquationSystem& sys, const VarId& start,
                          std::uint64_t fuel, const SolverOptions& options) {
  if (fuel == 0) throw UsageError("warrowing solver needs fuel >= 1");
  return Warrow(sys, fuel, options).run(start);
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) {
  if (name == "tsrr") return SolverKind::Tsrr;
  if (name == "tstp") return SolverKind::Tstp;
  if (name == "tsmp") return SolverKind::Tsmp;
  if (name == "warrow") return SolverKind::Warrow;
  return std::nullopt;
}

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::Tsrr: return "tsrr";
    case SolverKind::Tstp: return "tstp";
    case SolverKind::Tsmp: return "tsmp";
    case SolverKind::Warrow: return "warrow";
  }
  return "?";
}

}  // namespace tsolve
