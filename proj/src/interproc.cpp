#include "tsolve/interproc.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <functional>
#include <set>

#include "tsolve/error.hpp"

namespace tsolve {

namespace {

SchemeExprPtr make(SchemeExpr e) { return std::make_shared<const SchemeExpr>(std::move(e)); }

}  // namespace

SchemeExprPtr SchemeExpr::constant_of(Value d) {
  SchemeExpr e;
  e.kind = Kind::Const;
  e.constant = std::move(d);
  return make(std::move(e));
}

SchemeExprPtr SchemeExpr::ctx() { return make(SchemeExpr{}); }

SchemeExprPtr SchemeExpr::apply(std::string fn, std::vector<SchemeExprPtr> args) {
  SchemeExpr e;
  e.kind = Kind::Apply;
  e.name = std::move(fn);
  e.args = std::move(args);
  return make(std::move(e));
}

SchemeExprPtr SchemeExpr::cell(std::string point, SchemeExprPtr arg) {
  SchemeExpr e;
  e.kind = Kind::Cell;
  e.name = std::move(point);
  e.args = {std::move(arg)};
  return make(std::move(e));
}

bool equal(const SchemeExpr& a, const SchemeExpr& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size())
    return false;
  if (a.kind == SchemeExpr::Kind::Const && a.constant != b.constant) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

// Builtins.

BuiltinRegistry::BuiltinRegistry(LatticePtr lattice) : m_lattice(std::move(lattice)) {}

void BuiltinRegistry::add(BuiltinFn fn) {
  auto name = fn.name;
  m_fns.insert_or_assign(std::move(name), std::move(fn));
}

void BuiltinRegistry::add_family(const std::string& name, Family make) {
  m_families.insert_or_assign(name, std::move(make));
}

const BuiltinFn* BuiltinRegistry::find(const std::string& name) const {
  auto it = m_fns.find(name);
  return it == m_fns.end() ? nullptr : &it->second;
}

bool BuiltinRegistry::has_family(const std::string& name) const {
  return m_families.count(name) != 0;
}

BuiltinFn BuiltinRegistry::instantiate(const std::string& family,
                                       const std::string& param) const {
  auto it = m_families.find(family);
  if (it == m_families.end()) throw ParseError("unknown builtin family '" + family + "'");
  return it->second(param);
}

BuiltinRegistry default_builtins(const LatticePtr& lattice) {
  BuiltinRegistry reg(lattice);
  reg.add({"id", 1, [](std::span<const Value> a) { return a[0]; }});
  reg.add({"join", 2, [lattice](std::span<const Value> a) { return lattice->join(a[0], a[1]); }});
  reg.add({"meet", 2, [lattice](std::span<const Value> a) { return lattice->meet(a[0], a[1]); }});
  reg.add_family("join_const", [lattice](const std::string& p) {
    Value c = lattice->parse(p);
    return BuiltinFn{"join_const " + lattice->print(c), 1,
                     [lattice, c](std::span<const Value> a) { return lattice->join(a[0], c); }};
  });
  reg.add_family("meet_const", [lattice](const std::string& p) {
    Value c = lattice->parse(p);
    return BuiltinFn{"meet_const " + lattice->print(c), 1,
                     [lattice, c](std::span<const Value> a) { return lattice->meet(a[0], c); }};
  });
  if (lattice->has_arithmetic()) {
    reg.add({"inc", 1, [lattice](std::span<const Value> a) { return lattice->inc(a[0]); }});
    reg.add({"dec", 1, [lattice](std::span<const Value> a) { return lattice->dec(a[0]); }});
    reg.add_family("add_const", [lattice](const std::string& p) {
      std::int64_t k = 0;
      const char* first = p.data() + (!p.empty() && p[0] == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(first, p.data() + p.size(), k);
      if (ec != std::errc() || ptr != p.data() + p.size() || p.empty())
        throw ParseError("invalid add_const parameter '" + p + "'");
      return BuiltinFn{"add_const " + std::to_string(k), 1,
                       [lattice, k](std::span<const Value> a) {
                         return lattice->add_const(a[0], k);
                       }};
    });
  }
  return reg;
}

// Scheme invariants.

namespace {

template <typename F>
void for_each_cell(const SchemeExpr& e, F&& f) {
  if (e.kind == SchemeExpr::Kind::Cell) f(e);
  for (const auto& a : e.args) for_each_cell(*a, f);
}

void validate_expr(const Scheme& s, const SchemeExpr& e) {
  switch (e.kind) {
    case SchemeExpr::Kind::Const:
      if (!s.lattice->contains(e.constant))
        throw UsageError("constant outside the scheme's lattice");
      break;
    case SchemeExpr::Kind::Ctx:
      break;
    case SchemeExpr::Kind::Apply: {
      auto it = s.builtins.find(e.name);
      if (it == s.builtins.end()) throw UsageError("unknown builtin '" + e.name + "'");
      if (it->second.arity != e.args.size())
        throw UsageError("builtin '" + e.name + "' expects " +
                         std::to_string(it->second.arity) + " argument(s)");
      break;
    }
    case SchemeExpr::Kind::Cell:
      if (!s.rhs.count(e.name)) throw UsageError("unknown point '" + e.name + "'");
      if (e.args.size() != 1) throw UsageError("cell needs exactly one argument");
      break;
  }
  for (const auto& a : e.args) validate_expr(s, *a);
}

}  // namespace

void validate(const Scheme& s) {
  if (!s.lattice) throw UsageError("scheme has no lattice");
  for (const auto& p : s.points)
    if (!s.rhs.count(p)) throw UsageError("point '" + p + "' has no right-hand side");
  if (s.rhs.size() != s.points.size())
    throw UsageError("right-hand sides and declared points differ");
  for (const auto& [_, e] : s.rhs) validate_expr(s, *e);
  if (!s.rhs.count(s.start_point))
    throw UsageError("start point '" + s.start_point + "' is not declared");
  if (!s.lattice->contains(s.start_context))
    throw UsageError("start context outside the scheme's lattice");
}

// Semantics.

Value sem_expr(const SchemeExpr& e, const Value& a, const ContextLookup& lookup,
               const Scheme& s) {
  switch (e.kind) {
    case SchemeExpr::Kind::Const:
      return e.constant;
    case SchemeExpr::Kind::Ctx:
      return a;
    case SchemeExpr::Kind::Apply: {
      auto it = s.builtins.find(e.name);
      if (it == s.builtins.end()) throw UsageError("unknown builtin '" + e.name + "'");
      std::vector<Value> args;
      args.reserve(e.args.size());
      for (const auto& x : e.args) args.push_back(sem_expr(*x, a, lookup, s));
      return it->second.eval(args);
    }
    case SchemeExpr::Kind::Cell:
      return lookup(VarId(e.name, sem_expr(*e.args[0], a, lookup, s)));
  }
  return a;
}

namespace {

// Continuation-passing translation of sem_expr into a computation tree.
// Arguments are evaluated left to right, cell contexts innermost first.
class TreeBuilder {
 public:
  explicit TreeBuilder(std::shared_ptr<const Scheme> s) : m_s(std::move(s)) {}

  Tree build(const SchemeExprPtr& e, const Value& a, const Continuation& k) const {
    switch (e->kind) {
      case SchemeExpr::Kind::Const:
        return k(e->constant);
      case SchemeExpr::Kind::Ctx:
        return k(a);
      case SchemeExpr::Kind::Cell: {
        auto self = *this;
        const std::string point = e->name;
        return build(e->args[0], a, [self, point, k](const Value& c) {
          return Tree::query(VarId(point, c), k);
        });
      }
      case SchemeExpr::Kind::Apply: {
        auto it = m_s->builtins.find(e->name);
        if (it == m_s->builtins.end())
          throw UsageError("unknown builtin '" + e->name + "'");
        return build_args(e, 0, a, std::make_shared<const std::vector<Value>>(), &it->second, k);
      }
    }
    return k(a);
  }

 private:
  Tree build_args(const SchemeExprPtr& e, std::size_t i, const Value& a,
                  std::shared_ptr<const std::vector<Value>> done, const BuiltinFn* fn,
                  const Continuation& k) const {
    if (i == e->args.size()) return k(fn->eval(*done));
    auto self = *this;
    return build(e->args[i], a, [self, e, i, a, done, fn, k](const Value& v) {
      auto next = std::make_shared<std::vector<Value>>(*done);
      next->push_back(v);
      return self.build_args(e, i + 1, a, std::move(next), fn, k);
    });
  }

  std::shared_ptr<const Scheme> m_s;
};

}  // namespace

EquationSystem instantiate_system(const Scheme& s) {
  validate(s);
  auto shared = std::make_shared<const Scheme>(s);
  EquationSystem sys;
  sys.lattice = s.lattice;
  sys.rhs = [shared](const VarId& v) -> Tree {
    auto it = shared->rhs.find(v.name);
    if (it == shared->rhs.end() || !v.context)
      throw UnknownVariable("no program point for variable '" + v.name + "'");
    return TreeBuilder(shared).build(it->second, *v.context,
                                     [](const Value& r) { return Tree::answer(r); });
  };
  return sys;
}

std::vector<VarId> enumerate_variables(const Scheme& s) {
  std::vector<VarId> out;
  const auto contexts = s.lattice->enumerate();
  for (const auto& p : s.points)
    for (const auto& c : contexts) out.emplace_back(p, c);
  return out;
}

// Stratification.

namespace {

struct Edge {
  std::size_t to;
  bool strict;
};

struct Graph {
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<Edge>> out;
};

Graph call_graph(const Scheme& s) {
  Graph g;
  g.names = s.points;
  for (std::size_t i = 0; i < g.names.size(); ++i) g.index[g.names[i]] = i;
  g.out.resize(g.names.size());
  for (std::size_t u = 0; u < g.names.size(); ++u) {
    for_each_cell(*s.rhs.at(g.names[u]), [&](const SchemeExpr& c) {
      const bool strict = c.args[0]->kind != SchemeExpr::Kind::Ctx;
      g.out[u].push_back({g.index.at(c.name), strict});
    });
  }
  return g;
}

// Tarjan's algorithm; components come out in reverse topological order.
class Tarjan {
 public:
  explicit Tarjan(const Graph& g)
      : m_g(g), m_low(g.names.size()), m_num(g.names.size(), 0),
        m_on_stack(g.names.size(), false) {
    comp.resize(g.names.size());
    for (std::size_t v = 0; v < g.names.size(); ++v)
      if (m_num[v] == 0) visit(v);
  }

  std::vector<std::size_t> comp;
  std::size_t count = 0;

 private:
  void visit(std::size_t v) {
    m_num[v] = m_low[v] = ++m_counter;
    m_stack.push_back(v);
    m_on_stack[v] = true;
    for (const auto& e : m_g.out[v]) {
      if (m_num[e.to] == 0) {
        visit(e.to);
        m_low[v] = std::min(m_low[v], m_low[e.to]);
      } else if (m_on_stack[e.to]) {
        m_low[v] = std::min(m_low[v], m_num[e.to]);
      }
    }
    if (m_low[v] == m_num[v]) {
      std::size_t w;
      do {
        w = m_stack.back();
        m_stack.pop_back();
        m_on_stack[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  }

  const Graph& m_g;
  std::vector<std::size_t> m_low, m_num;
  std::vector<bool> m_on_stack;
  std::vector<std::size_t> m_stack;
  std::size_t m_counter = 0;
};

// Shortest path from `from` to `to` staying inside one component.
std::vector<std::size_t> path_within(const Graph& g, const Tarjan& t, std::size_t from,
                                     std::size_t to) {
  std::vector<std::optional<std::size_t>> parent(g.names.size());
  std::deque<std::size_t> work{from};
  parent[from] = from;
  while (!work.empty()) {
    const auto v = work.front();
    work.pop_front();
    if (v == to) break;
    for (const auto& e : g.out[v]) {
      if (t.comp[e.to] != t.comp[from] || parent[e.to]) continue;
      parent[e.to] = v;
      work.push_back(e.to);
    }
  }
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(*parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::variant<Levels, StratificationCycle> check_stratified(const Scheme& s) {
  const Graph g = call_graph(s);
  const Tarjan t(g);

  for (std::size_t u = 0; u < g.names.size(); ++u) {
    for (const auto& e : g.out[u]) {
      if (!e.strict || t.comp[e.to] != t.comp[u]) continue;
      StratificationCycle cycle;
      cycle.points.push_back(g.names[u]);
      if (e.to != u) {
        for (auto v : path_within(g, t, e.to, u)) cycle.points.push_back(g.names[v]);
        cycle.points.pop_back();  // drop the repeated u
      }
      return cycle;
    }
  }

  // Longest strict-edge-counting path over the condensation; components are
  // numbered sinks first, so successors are final when a component is reached.
  std::vector<std::uint32_t> comp_level(t.count, 0);
  std::vector<std::vector<std::size_t>> members(t.count);
  for (std::size_t v = 0; v < g.names.size(); ++v) members[t.comp[v]].push_back(v);
  for (std::size_t c = 0; c < t.count; ++c) {
    for (auto v : members[c])
      for (const auto& e : g.out[v])
        if (t.comp[e.to] != c)
          comp_level[c] = std::max(comp_level[c], comp_level[t.comp[e.to]] + (e.strict ? 1u : 0u));
  }
  Levels levels;
  for (std::size_t v = 0; v < g.names.size(); ++v) levels[g.names[v]] = comp_level[t.comp[v]];
  return levels;
}

bool levels_valid(const Scheme& s, const Levels& levels) {
  for (const auto& [u, e] : s.rhs) {
    auto lu = levels.find(u);
    if (lu == levels.end()) return false;
    bool ok = true;
    for_each_cell(*e, [&](const SchemeExpr& c) {
      auto lc = levels.find(c.name);
      if (lc == levels.end()) {
        ok = false;
      } else if (lc->second == lu->second) {
        ok = ok && c.args[0]->kind == SchemeExpr::Kind::Ctx;
      } else {
        ok = ok && lc->second < lu->second;
      }
    });
    if (!ok) return false;
  }
  return true;
}

std::string print_scheme_expr(const SchemeExpr& e, const Lattice& lattice) {
  auto operand = [&](const SchemeExprPtr& a) {
    if (a->kind == SchemeExpr::Kind::Ctx) return std::string("ctx");
    return "(" + print_scheme_expr(*a, lattice) + ")";
  };
  switch (e.kind) {
    case SchemeExpr::Kind::Const:
      return "lit " + lattice.print(e.constant);
    case SchemeExpr::Kind::Ctx:
      return "ctx";
    case SchemeExpr::Kind::Cell:
      return "cell " + e.name + " " + operand(e.args[0]);
    case SchemeExpr::Kind::Apply: {
      std::string out;
      if (e.name == "join" || e.name == "meet") {
        out = e.name;
      } else if (e.name.find(' ') != std::string::npos) {
        out = "apply (" + e.name + ")";
      } else {
        out = "apply " + e.name;
      }
      for (const auto& a : e.args) out += " " + operand(a);
      return out;
    }
  }
  return {};
}

}  // namespace tsolve
