#include "tsolve/eqsys.hpp"

#include "tsolve/error.hpp"

namespace tsolve {

std::string to_string(const VarId& v, const Lattice& lattice) {
  if (!v.context) return v.name;
  return v.name + ":" + lattice.print(*v.context);
}

Value eval_tree(const Tree& t, const Lookup& lookup) {
  if (t.is_answer()) return t.value();
  const auto& q = t.as_query();
  Tree next = q.cont(lookup(q.var));
  while (!next.is_answer()) {
    const auto& nq = next.as_query();
    Tree after = nq.cont(lookup(nq.var));
    next = std::move(after);
  }
  return next.value();
}

VarSet tree_dep(const Tree& t, const Lookup& lookup) {
  VarSet deps;
  if (t.is_answer()) return deps;
  deps.insert(t.as_query().var);
  Tree next = t.as_query().cont(lookup(t.as_query().var));
  while (!next.is_answer()) {
    const auto& nq = next.as_query();
    deps.insert(nq.var);
    Tree after = nq.cont(lookup(nq.var));
    next = std::move(after);
  }
  return deps;
}

const Value& Assignment::at(const VarId& v) const {
  auto it = m_values.find(v);
  if (it == m_values.end())
    throw UnknownVariable("variable " + to_string(v, *m_lattice) + " is not assigned");
  return it->second;
}

void Assignment::set(const VarId& v, Value value) {
  if (!m_lattice->contains(value))
    throw UsageError("value does not belong to the assignment's lattice");
  m_values.insert_or_assign(v, std::move(value));
}

VarSet Assignment::domain() const {
  VarSet out;
  for (const auto& [v, _] : m_values) out.insert(out.end(), v);
  return out;
}

Lookup extend_top(const Assignment& a) {
  return [&a](const VarId& v) -> Value {
    auto it = a.values().find(v);
    return it == a.values().end() ? a.lattice()->top() : it->second;
  };
}

Lookup strict_lookup(const Assignment& a) {
  return [&a](const VarId& v) -> Value { return a.at(v); };
}

bool is_closed(const Assignment& a, const EquationSystem& sys) {
  const Lookup lookup = extend_top(a);
  for (const auto& [y, _] : a) {
    for (const auto& z : tree_dep(sys.rhs(y), lookup))
      if (!a.contains(z)) return false;
  }
  return true;
}

}  // namespace tsolve
