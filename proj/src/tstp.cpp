#include <cassert>

#include "local_state.hpp"

namespace tsolve {

namespace {

using detail::Index;
using detail::LocalState;
using detail::Prio;

class Tstp {
 public:
  Tstp(const EquationSystem& sys, const SolverOptions& options) : m_st(sys, options) {}

  SolverResult run(const VarId& start) {
    solve1(start, 0);
    Assignment s0(m_st.sys.lattice);
    Assignment s1(m_st.sys.lattice);
    for (Index i = 0; i < m_st.vars.size(); ++i) {
      s0.set(m_st.vars[i], m_sigma0[i]);
      if (m_sigma1[i]) s1.set(m_st.vars[i], *m_sigma1[i]);
    }
    SolverResult r{std::move(s1), std::move(s0), m_st.stats, Status::Completed};
    r.stats.vars_encountered = m_st.vars.size();
    return r;
  }

 private:
  const Lattice& lat() const { return *m_st.sys.lattice; }

  // Widening phase.

  Index solve0(const VarId& v) {
    if (auto i = m_st.find(v)) return *i;
    const Index y = m_st.intern(v);
    m_sigma0.push_back(lat().bot());
    m_sigma1.emplace_back();
    do_var0(y);
    iterate0(m_st.prio[y]);
    return y;
  }

  void iterate0(Prio n) {
    while (!m_st.queue.empty() && m_st.queue.min_prio() <= n)
      do_var0(m_st.queue.extract_min());
  }

  void do_var0(Index y) {
    const bool isp = m_st.take_point(y);
    Lookup eval = [this, y](const VarId& z) {
      const Index zi = solve0(z);
      m_st.note_query(y, zi);
      return m_sigma0[zi];
    };
    Value tmp = eval_tree(m_st.rhs_of(y), eval);
    if (isp) {
      ++m_st.stats.widen_apps;
      tmp = lat().widen(m_sigma0[y], tmp);
    }
    if (lat().eq(m_sigma0[y], tmp)) return;
    m_sigma0[y] = std::move(tmp);
    m_st.enqueue_infl(y);
  }

  // Narrowing phase.

  Index solve1(const VarId& v, Prio n) {
    if (auto i = m_st.find(v); i && m_sigma1[*i]) return *i;
    const Index y = solve0(v);
    m_sigma1[y] = m_sigma0[y];
    assert(m_sigma1.size() == m_sigma0.size());  // dom1 is a subset of dom0
    m_st.enqueue(y);
    m_st.enqueue_infl(y);
    iterate1(n);
    return y;
  }

  void iterate1(Prio n) {
    while (!m_st.queue.empty() && m_st.queue.min_prio() <= n) {
      const Index y = m_st.queue.extract_min();
      solve1(m_st.vars[y], m_st.prio[y] - 1);
      do_var1(y);
    }
  }

  void do_var1(Index y) {
    const bool isp = m_st.take_point(y);
    Lookup eval = [this, y](const VarId& z) {
      const Index zi = solve1(z, m_st.prio[y] - 1);
      m_st.note_query(y, zi);
      return *m_sigma1[zi];
    };
    Value tmp = eval_tree(m_st.rhs_of(y), eval);
    if (isp) {
      ++m_st.stats.narrow_apps;
      tmp = lat().narrow(*m_sigma1[y], tmp);
    }
    if (lat().eq(*m_sigma1[y], tmp)) return;
    m_sigma1[y] = std::move(tmp);
    m_st.enqueue_infl(y);
  }

  LocalState m_st;
  std::vector<Value> m_sigma0;
  std::vector<std::optional<Value>> m_sigma1;
};

}  // namespace

SolverResult tstp(const EquationSystem& sys, const VarId& start,
                  const SolverOptions& options) {
  return Tstp(sys, options).run(start);
}

}  // namespace tsolve
