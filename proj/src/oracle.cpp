#include "tsolve/oracle.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>

#include "tsolve/error.hpp"

namespace tsolve::oracle {

Assignment kleene_least_solution(const EquationSystem& sys, const std::vector<VarId>& vars) {
  const Lattice& lat = *sys.lattice;
  if (!lat.is_finite())
    throw UsageError("Kleene iteration needs a finite lattice, got " + lat.descriptor().to_string());
  Assignment cur(sys.lattice);
  for (const auto& v : vars) cur.set(v, lat.bot());
  const std::uint64_t bound = lat.height() * vars.size() + 1;
  for (std::uint64_t round = 0; round <= bound; ++round) {
    Assignment next(sys.lattice);
    const Lookup lookup = strict_lookup(cur);
    for (const auto& v : vars) next.set(v, eval_tree(sys.rhs(v), lookup));
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw NonConvergence("Kleene iteration did not stabilize after " + std::to_string(bound) +
                       " rounds; some right-hand side is probably not monotone");
}

namespace {

class LowerMono {
 public:
  LowerMono(const Lookup& a, const std::vector<VarId>& vars, const Lattice& lat,
            std::uint64_t budget)
      : m_a(a), m_vars(vars.begin(), vars.end()), m_lat(lat), m_budget(budget),
        m_domain(lat.enumerate()) {}

  Value run(const Tree& t) { return visit(t); }

 private:
  Value visit(const Tree& t) {
    if (t.is_answer()) {
      if (++m_leaves > m_budget)
        throw OracleBudgetExceeded("lower monotonization needs more than " +
                                   std::to_string(m_budget) +
                                   " evaluations; shrink the instance");
      return t.value();
    }
    const auto& q = t.as_query();
    if (auto it = m_fixed.find(q.var); it != m_fixed.end()) return visit(q.cont(it->second));
    if (!m_vars.count(q.var))
      throw UnknownVariable("tree queries variable outside the enumeration: " +
                            to_string(q.var, m_lat));
    const Value floor = m_a(q.var);
    std::optional<Value> acc;
    for (const auto& d : m_domain) {
      if (!m_lat.leq(floor, d)) continue;
      m_fixed[q.var] = d;
      Value r = visit(q.cont(d));
      acc = acc ? m_lat.meet(*acc, r) : std::move(r);
      if (m_lat.eq(*acc, m_lat.bot())) break;
    }
    m_fixed.erase(q.var);
    return *acc;
  }

  const Lookup& m_a;
  std::set<VarId> m_vars;
  const Lattice& m_lat;
  std::uint64_t m_budget;
  std::vector<Value> m_domain;
  std::map<VarId, Value> m_fixed;
  std::uint64_t m_leaves = 0;
};

}  // namespace

Value lower_mono_value(const Tree& t, const Lookup& a, const std::vector<VarId>& vars,
                       const Lattice& lattice, std::uint64_t budget) {
  if (!lattice.is_finite())
    throw UsageError("lower monotonization needs a finite lattice");
  return LowerMono(a, vars, lattice, budget).run(t);
}

bool is_post_solution(const Assignment& a, const EquationSystem& sys) {
  const Lattice& lat = *sys.lattice;
  const Lookup lookup = extend_top(a);
  for (const auto& [y, value] : a)
    if (!lat.leq(eval_tree(sys.rhs(y), lookup), value)) return false;
  return true;
}

bool is_post_solution_lower_mono(const Assignment& a, const EquationSystem& sys,
                                  const std::vector<VarId>& vars) {
  const Lattice& lat = *sys.lattice;
  const Lookup lookup = extend_top(a);
  for (const auto& y : vars)
    if (!lat.leq(lower_mono_value(sys.rhs(y), lookup, vars, lat), lookup(y))) return false;
  return true;
}

bool is_monotone(const Tree& t, const std::vector<VarId>& vars, const Lattice& lattice) {
  const auto domain = lattice.enumerate();
  const std::size_t n = vars.size();
  double work = static_cast<double>(n + 1) * static_cast<double>(domain.size());
  for (std::size_t i = 0; i < n; ++i) work *= static_cast<double>(domain.size());
  if (work > static_cast<double>(kEnumerationBudget))
    throw OracleBudgetExceeded("monotonicity check too large; shrink the instance");

  std::map<VarId, Value> sigma;
  for (const auto& v : vars) sigma[v] = domain.front();
  auto eval = [&] {
    return eval_tree(t, [&](const VarId& v) -> Value {
      auto it = sigma.find(v);
      if (it == sigma.end())
        throw UnknownVariable("tree queries unlisted variable " + to_string(v, lattice));
      return it->second;
    });
  };

  // Product order is generated by raising one coordinate at a time.
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) sigma[vars[i]] = domain[idx[i]];
    const Value base = eval();
    for (std::size_t i = 0; i < n; ++i) {
      const Value old = domain[idx[i]];
      for (const auto& d : domain) {
        if (lattice.eq(d, old) || !lattice.leq(old, d)) continue;
        sigma[vars[i]] = d;
        const bool ok = lattice.leq(base, eval());
        sigma[vars[i]] = old;
        if (!ok) return false;
      }
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == domain.size()) idx[k++] = 0;
    if (k == n) return true;
  }
}

// Concrete nested-call system.

namespace {

using Bits = std::uint64_t;
using BitsCont = std::function<Tree(Bits)>;

std::vector<std::size_t> members(Bits b) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; b != 0; ++i, b >>= 1)
    if (b & 1) out.push_back(i);
  return out;
}

Value singleton(std::size_t i) { return SetValue{Bits{1} << i}; }

// Union of the values of point at every state in elems, from index i on.
Tree union_over(std::string point, std::shared_ptr<const std::vector<std::size_t>> elems,
                std::size_t i, Bits acc, BitsCont k) {
  if (i == elems->size()) return k(acc);
  VarId var(point, singleton((*elems)[i]));
  return Tree::query(std::move(var), [point, elems, i, acc, k](const Value& d) {
    return union_over(point, elems, i + 1, acc | std::get<SetValue>(d).bits, k);
  });
}

Tree union_over(const std::string& point, Bits states, BitsCont k) {
  return union_over(point, std::make_shared<const std::vector<std::size_t>>(members(states)), 0,
                    0, std::move(k));
}

}  // namespace

ConcreteSystem nested_call_system(const std::vector<std::string>& states,
                                  const std::vector<std::vector<std::size_t>>& succ) {
  if (succ.size() != states.size()) throw UsageError("one successor list per state expected");
  ConcreteSystem c;
  c.states = states;
  c.sys.lattice = make_domain(LatticeDescriptor::powerset(states));
  for (const auto& p : {"u", "v"})
    for (std::size_t q = 0; q < states.size(); ++q) c.vars.emplace_back(p, singleton(q));
  c.sys.all_vars = c.vars;

  std::vector<Bits> step(states.size(), 0);
  for (std::size_t q = 0; q < states.size(); ++q)
    for (auto s : succ[q]) {
      if (s >= states.size()) throw UsageError("successor index out of range");
      step[q] |= Bits{1} << s;
    }

  const std::size_t nstates = states.size();
  c.sys.rhs = [step, nstates](const VarId& x) -> Tree {
    if (!x.context || !std::holds_alternative<SetValue>(*x.context))
      throw UnknownVariable("no such concrete variable: " + x.name);
    const Bits ctx = std::get<SetValue>(*x.context).bits;
    if (std::popcount(ctx) != 1 || std::countr_zero(ctx) >= static_cast<int>(nstates))
      throw UnknownVariable("no such concrete variable: " + x.name);
    if (x.name == "u") {
      return Tree::query(x, [ctx](const Value& d) {
        return union_over("v", std::get<SetValue>(d).bits, [ctx](Bits mid) {
          return union_over("v", mid, [ctx](Bits out) {
            return Tree::answer(SetValue{out | ctx});
          });
        });
      });
    }
    if (x.name == "v") {
      return Tree::query(x, [ctx, step](const Value& d) {
        Bits out = ctx;
        for (auto q : members(std::get<SetValue>(d).bits)) out |= step[q];
        return Tree::answer(SetValue{out});
      });
    }
    throw UnknownVariable("no such concrete variable: " + x.name);
  };
  return c;
}

ConcreteSystem example_nested_call_system() {
  return nested_call_system({"q0", "q1"}, {{1}, {}});
}

// Galois connections.

GaloisConnection identity_connection(const LatticePtr& powerset) {
  if (powerset->kind() != DomainKind::Powerset)
    throw UsageError("identity connection expects a powerset lattice");
  auto id = [](const Value& v) { return v; };
  return {powerset, powerset, id, id, powerset->enumerate()};
}

GaloisConnection hull_connection(const LatticePtr& int_powerset) {
  if (int_powerset->kind() != DomainKind::Powerset)
    throw UsageError("hull connection expects a powerset lattice");
  const auto& atoms = int_powerset->descriptor().atoms;
  std::vector<std::int64_t> nums;
  for (const auto& a : atoms) {
    std::int64_t n = 0;
    auto [p, ec] = std::from_chars(a.data(), a.data() + a.size(), n);
    if (ec != std::errc() || p != a.data() + a.size())
      throw UsageError("hull connection needs integer atoms, got '" + a + "'");
    nums.push_back(n);
  }
  auto interval = make_domain(LatticeDescriptor::interval());

  auto alpha = [nums](const Value& c) -> Value {
    const Bits b = std::get<SetValue>(c).bits;
    if (b == 0) return IntervalValue::bot();
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (auto i : members(b)) {
      lo = std::min(lo, nums[i]);
      hi = std::max(hi, nums[i]);
    }
    return IntervalValue::of(Bound::finite(lo), Bound::finite(hi));
  };
  auto gamma = [nums](const Value& d) -> Value {
    const auto& iv = std::get<IntervalValue>(d);
    Bits out = 0;
    if (iv.empty) return SetValue{0};
    for (std::size_t i = 0; i < nums.size(); ++i) {
      const Bound b = Bound::finite(nums[i]);
      if (iv.lo <= b && b <= iv.hi) out |= Bits{1} << i;
    }
    return SetValue{out};
  };

  std::vector<Bound> bounds{Bound::minus_inf(), Bound::plus_inf()};
  if (!nums.empty()) {
    const auto [mn, mx] = std::minmax_element(nums.begin(), nums.end());
    for (std::int64_t k = *mn - 1; k <= *mx + 1; ++k) bounds.push_back(Bound::finite(k));
  }
  std::vector<Value> samples{IntervalValue::bot()};
  for (const auto& lo : bounds)
    for (const auto& hi : bounds)
      if (lo <= hi && lo != Bound::plus_inf() && hi != Bound::minus_inf())
        samples.push_back(IntervalValue::of(lo, hi));
  return {int_powerset, interval, alpha, gamma, samples};
}

bool adjunction_holds(const GaloisConnection& g) {
  for (const auto& c : g.concrete->enumerate())
    for (const auto& d : g.abstract_samples)
      if (g.abstract->leq(g.alpha(c), d) != g.concrete->leq(c, g.gamma(d))) return false;
  return true;
}

bool check_sound(const ConcreteSystem& conc, const Assignment& abs_assignment,
                 const GaloisConnection& g, const DescriptionRelation& r) {
  const Assignment sigma = kleene_least_solution(conc.sys, conc.vars);
  const Lookup abs = extend_top(abs_assignment);
  for (const auto& [x, y] : r)
    if (!g.concrete->leq(sigma.at(x), g.gamma(abs(y)))) return false;
  return true;
}

bool check_sigma_closed(const ConcreteSystem& conc, const Assignment& sol, const VarSet& subset) {
  const Lookup lookup = strict_lookup(sol);
  for (const auto& x : subset)
    for (const auto& d : tree_dep(conc.sys.rhs(x), lookup))
      if (!subset.count(d)) return false;
  return true;
}

// Random systems.

namespace {

class ExprGen {
 public:
  ExprGen(std::uint64_t seed, std::size_t nvars, const Lattice& lat, bool monotone_only)
      : m_rng(seed), m_nvars(nvars), m_values(lat.enumerate()), m_monotone(monotone_only) {}

  RhsExprPtr gen(std::size_t depth) {
    if (depth == 0 || pick(10) < 3) return leaf();
    const std::size_t ops = m_monotone ? 2 : 3;
    switch (pick(ops)) {
      case 0: return RhsExpr::join(gen(depth - 1), gen(depth - 1));
      case 1: return RhsExpr::meet(gen(depth - 1), gen(depth - 1));
      default: {
        const auto cmp = pick(2) == 0 ? RhsExpr::Cmp::Eq : RhsExpr::Cmp::Leq;
        auto l = gen(depth - 1);
        auto r = gen(depth - 1);
        auto t = gen(depth - 1);
        auto e = gen(depth - 1);
        return RhsExpr::ite(cmp, l, r, t, e);
      }
    }
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(m_rng);
  }

  RhsExprPtr leaf() {
    if (pick(3) < 2) return RhsExpr::get("y" + std::to_string(pick(m_nvars) + 1));
    return RhsExpr::lit(m_values[pick(m_values.size())]);
  }

  std::mt19937_64 m_rng;
  std::size_t m_nvars;
  std::vector<Value> m_values;
  bool m_monotone;
};

}  // namespace

RandomSystem gen_random_system(std::uint64_t seed, std::size_t nvars,
                               const LatticeDescriptor& descriptor, std::size_t depth,
                               bool monotone_only) {
  if (nvars == 0) throw UsageError("random system needs at least one variable");
  RandomSystem out;
  out.lattice = make_domain(descriptor);
  if (!out.lattice->is_finite()) throw UsageError("random systems need a finite lattice");
  ExprGen g(seed, nvars, *out.lattice, monotone_only);
  for (std::size_t i = 1; i <= nvars; ++i) {
    out.vars.emplace_back("y" + std::to_string(i));
    out.exprs.push_back(g.gen(depth));
  }
  out.sys = dsl_system(out.lattice, out.vars, out.exprs);
  return out;
}

}  // namespace tsolve::oracle
