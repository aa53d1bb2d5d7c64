#include "tsolve/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <set>

#include "tsolve/error.hpp"

namespace tsolve {

namespace {

constexpr std::size_t kMaxAtoms = 63;
// Enumeration of powersets is only offered up to this many atoms.
constexpr std::size_t kMaxEnumerableAtoms = 20;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int out{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return out;
}

Bound add_bound(Bound b, std::int64_t k) {
  if (!b.is_finite()) return b;
  std::int64_t out;
  if (__builtin_add_overflow(b.value, k, &out))
    return k > 0 ? Bound::plus_inf() : Bound::minus_inf();
  return Bound::finite(out);
}

std::string print_bound(Bound b) {
  if (b.inf < 0) return "-inf";
  if (b.inf > 0) return "inf";
  return std::to_string(b.value);
}

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::Chain: return "chain";
    case DomainKind::Powerset: return "powerset";
    case DomainKind::NatInf: return "natinf";
    case DomainKind::Interval: return "interval";
  }
  return "?";
}

}  // namespace

IntervalValue IntervalValue::of(Bound lo, Bound hi) {
  if (lo.inf > 0 || hi.inf < 0 || hi < lo) return bot();
  IntervalValue v;
  v.empty = false;
  v.lo = lo;
  v.hi = hi;
  if (!v.lo.is_finite()) v.lo.value = 0;
  if (!v.hi.is_finite()) v.hi.value = 0;
  return v;
}

LatticeDescriptor LatticeDescriptor::chain(std::uint32_t n) {
  LatticeDescriptor d;
  d.kind = DomainKind::Chain;
  d.chain_size = n;
  return d;
}

LatticeDescriptor LatticeDescriptor::powerset(std::vector<std::string> atoms) {
  LatticeDescriptor d;
  d.kind = DomainKind::Powerset;
  d.atoms = std::move(atoms);
  return d;
}

LatticeDescriptor LatticeDescriptor::natinf() { return {}; }

LatticeDescriptor LatticeDescriptor::interval() {
  LatticeDescriptor d;
  d.kind = DomainKind::Interval;
  return d;
}

void LatticeDescriptor::validate() const {
  switch (kind) {
    case DomainKind::Chain:
      if (chain_size == 0) throw UsageError("chain lattice needs at least one element");
      break;
    case DomainKind::Powerset: {
      if (atoms.empty()) throw UsageError("powerset lattice needs at least one atom");
      if (atoms.size() > kMaxAtoms)
        throw UsageError("powerset lattice supports at most 63 atoms");
      std::set<std::string> seen;
      for (const auto& a : atoms) {
        if (a.empty() || a.find_first_of("{},[] \t\n#()") != std::string::npos)
          throw UsageError("invalid atom name '" + a + "'");
        if (!seen.insert(a).second) throw UsageError("duplicate atom '" + a + "'");
      }
      break;
    }
    case DomainKind::NatInf:
    case DomainKind::Interval:
      break;
  }
}

std::string LatticeDescriptor::to_string() const {
  std::string out = kind_name(kind);
  if (kind == DomainKind::Chain) out += " " + std::to_string(chain_size);
  if (kind == DomainKind::Powerset)
    for (const auto& a : atoms) out += " " + a;
  return out;
}

Lattice::Lattice(LatticeDescriptor descriptor) : m_desc(std::move(descriptor)) {
  m_desc.validate();
}

LatticePtr make_domain(LatticeDescriptor descriptor) {
  return std::make_shared<const Lattice>(std::move(descriptor));
}

Value Lattice::bot() const {
  switch (m_desc.kind) {
    case DomainKind::Chain: return ChainValue{0};
    case DomainKind::Powerset: return SetValue{0};
    case DomainKind::NatInf: return NatValue{0, false};
    case DomainKind::Interval: return IntervalValue::bot();
  }
  return {};
}

Value Lattice::top() const {
  switch (m_desc.kind) {
    case DomainKind::Chain: return ChainValue{m_desc.chain_size - 1};
    case DomainKind::Powerset: {
      const auto n = m_desc.atoms.size();
      return SetValue{n == 64 ? ~0ULL : ((1ULL << n) - 1)};
    }
    case DomainKind::NatInf: return NatValue::inf();
    case DomainKind::Interval:
      return IntervalValue::of(Bound::minus_inf(), Bound::plus_inf());
  }
  return {};
}

bool Lattice::contains(const Value& v) const {
  switch (m_desc.kind) {
    case DomainKind::Chain: {
      auto* c = std::get_if<ChainValue>(&v);
      return c && c->index < m_desc.chain_size;
    }
    case DomainKind::Powerset: {
      auto* s = std::get_if<SetValue>(&v);
      return s && (s->bits & ~std::get<SetValue>(top()).bits) == 0;
    }
    case DomainKind::NatInf: {
      auto* n = std::get_if<NatValue>(&v);
      return n && !(n->infinite && n->n != 0);
    }
    case DomainKind::Interval: {
      auto* i = std::get_if<IntervalValue>(&v);
      return i && *i == (i->empty ? IntervalValue::bot() : IntervalValue::of(i->lo, i->hi));
    }
  }
  return false;
}

void Lattice::check(const Value& v) const {
  if (!contains(v))
    throw UsageError("value does not belong to the " + m_desc.to_string() + " lattice");
}

void Lattice::check(const Value& a, const Value& b) const {
  check(a);
  check(b);
}

bool Lattice::leq(const Value& a, const Value& b) const {
  check(a, b);
  switch (m_desc.kind) {
    case DomainKind::Chain:
      return std::get<ChainValue>(a).index <= std::get<ChainValue>(b).index;
    case DomainKind::Powerset:
      return (std::get<SetValue>(a).bits & ~std::get<SetValue>(b).bits) == 0;
    case DomainKind::NatInf: {
      const auto& x = std::get<NatValue>(a);
      const auto& y = std::get<NatValue>(b);
      if (y.infinite) return true;
      return !x.infinite && x.n <= y.n;
    }
    case DomainKind::Interval: {
      const auto& x = std::get<IntervalValue>(a);
      const auto& y = std::get<IntervalValue>(b);
      if (x.empty) return true;
      if (y.empty) return false;
      return y.lo <= x.lo && x.hi <= y.hi;
    }
  }
  return false;
}

bool Lattice::eq(const Value& a, const Value& b) const {
  check(a, b);
  return a == b;
}

Value Lattice::join(const Value& a, const Value& b) const {
  check(a, b);
  switch (m_desc.kind) {
    case DomainKind::Chain:
      return ChainValue{std::max(std::get<ChainValue>(a).index,
                                 std::get<ChainValue>(b).index)};
    case DomainKind::Powerset:
      return SetValue{std::get<SetValue>(a).bits | std::get<SetValue>(b).bits};
    case DomainKind::NatInf:
      return leq(a, b) ? b : a;
    case DomainKind::Interval: {
      const auto& x = std::get<IntervalValue>(a);
      const auto& y = std::get<IntervalValue>(b);
      if (x.empty) return y;
      if (y.empty) return x;
      return IntervalValue::of(std::min(x.lo, y.lo), std::max(x.hi, y.hi));
    }
  }
  return {};
}

Value Lattice::meet(const Value& a, const Value& b) const {
  check(a, b);
  switch (m_desc.kind) {
    case DomainKind::Chain:
      return ChainValue{std::min(std::get<ChainValue>(a).index,
                                 std::get<ChainValue>(b).index)};
    case DomainKind::Powerset:
      return SetValue{std::get<SetValue>(a).bits & std::get<SetValue>(b).bits};
    case DomainKind::NatInf:
      return leq(a, b) ? a : b;
    case DomainKind::Interval: {
      const auto& x = std::get<IntervalValue>(a);
      const auto& y = std::get<IntervalValue>(b);
      if (x.empty || y.empty) return IntervalValue::bot();
      return IntervalValue::of(std::max(x.lo, y.lo), std::min(x.hi, y.hi));
    }
  }
  return {};
}

Value Lattice::widen(const Value& a, const Value& b) const {
  check(a, b);
  switch (m_desc.kind) {
    case DomainKind::Chain:
    case DomainKind::Powerset:
      return join(a, b);
    case DomainKind::NatInf: {
      // if a < b then inf else a
      if (leq(a, b) && a != b) return NatValue::inf();
      return a;
    }
    case DomainKind::Interval: {
      const auto& x = std::get<IntervalValue>(a);
      const auto& y = std::get<IntervalValue>(b);
      if (x.empty) return y;
      if (y.empty) return x;
      Bound lo = y.lo < x.lo ? Bound::minus_inf() : x.lo;
      Bound hi = x.hi < y.hi ? Bound::plus_inf() : x.hi;
      return IntervalValue::of(lo, hi);
    }
  }
  return {};
}

Value Lattice::narrow(const Value& a, const Value& b) const {
  check(a, b);
  switch (m_desc.kind) {
    case DomainKind::Chain:
    case DomainKind::Powerset:
      return meet(a, b);
    case DomainKind::NatInf:
      // if a = inf then b else a
      return std::get<NatValue>(a).infinite ? b : a;
    case DomainKind::Interval: {
      const auto& x = std::get<IntervalValue>(a);
      const auto& y = std::get<IntervalValue>(b);
      if (x.empty || y.empty) return IntervalValue::bot();
      Bound lo = x.lo.inf < 0 ? y.lo : x.lo;
      Bound hi = x.hi.inf > 0 ? y.hi : x.hi;
      return IntervalValue::of(lo, hi);
    }
  }
  return {};
}

Value Lattice::warrow(const Value& a, const Value& b) const {
  return leq(b, a) ? narrow(a, b) : widen(a, b);
}

Value Lattice::add_const(const Value& a, std::int64_t k) const {
  check(a);
  switch (m_desc.kind) {
    case DomainKind::Chain: {
      const std::int64_t idx = std::get<ChainValue>(a).index;
      const std::int64_t last = m_desc.chain_size - 1;
      std::int64_t out = k > last ? last : (k < -last ? -last : k);
      out = std::clamp<std::int64_t>(idx + out, 0, last);
      return ChainValue{static_cast<std::uint32_t>(out)};
    }
    case DomainKind::NatInf: {
      const auto& n = std::get<NatValue>(a);
      if (n.infinite) return n;
      if (k >= 0) {
        std::uint64_t out;
        if (__builtin_add_overflow(n.n, static_cast<std::uint64_t>(k), &out))
          return NatValue::inf();
        return NatValue{out, false};
      }
      const auto dec = static_cast<std::uint64_t>(-(k + 1)) + 1;
      return NatValue{n.n > dec ? n.n - dec : 0, false};
    }
    case DomainKind::Interval: {
      const auto& i = std::get<IntervalValue>(a);
      if (i.empty) return i;
      return IntervalValue::of(add_bound(i.lo, k), add_bound(i.hi, k));
    }
    case DomainKind::Powerset:
      break;
  }
  throw UsageError("arithmetic is not defined on powerset lattices");
}

Value Lattice::inc(const Value& a) const { return add_const(a, 1); }

Value Lattice::dec(const Value& a) const { return add_const(a, -1); }

bool Lattice::is_finite() const {
  return m_desc.kind == DomainKind::Chain || m_desc.kind == DomainKind::Powerset;
}

std::uint64_t Lattice::size() const {
  if (m_desc.kind == DomainKind::Chain) return m_desc.chain_size;
  if (m_desc.kind == DomainKind::Powerset && m_desc.atoms.size() < 64)
    return 1ULL << m_desc.atoms.size();
  throw UsageError("lattice " + m_desc.to_string() + " is not enumerable");
}

std::uint64_t Lattice::height() const {
  if (m_desc.kind == DomainKind::Chain) return m_desc.chain_size - 1;
  if (m_desc.kind == DomainKind::Powerset) return m_desc.atoms.size();
  throw UsageError("lattice " + m_desc.to_string() + " has infinite height");
}

std::vector<Value> Lattice::enumerate() const {
  if (m_desc.kind == DomainKind::Powerset && m_desc.atoms.size() > kMaxEnumerableAtoms)
    throw UsageError("powerset too large to enumerate");
  const auto n = size();
  std::vector<Value> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (m_desc.kind == DomainKind::Chain)
      out.emplace_back(ChainValue{static_cast<std::uint32_t>(i)});
    else
      out.emplace_back(SetValue{i});
  }
  return out;
}

Value Lattice::parse(std::string_view text) const {
  const auto s = trim(text);
  const std::string shown(s);
  switch (m_desc.kind) {
    case DomainKind::Chain: {
      auto idx = parse_int<std::uint32_t>(s);
      if (!idx || *idx >= m_desc.chain_size)
        throw ParseError("invalid chain element '" + shown + "'");
      return ChainValue{*idx};
    }
    case DomainKind::NatInf: {
      if (s == "inf") return NatValue::inf();
      auto n = parse_int<std::uint64_t>(s);
      if (!n) throw ParseError("invalid natinf value '" + shown + "'");
      return NatValue{*n, false};
    }
    case DomainKind::Powerset: {
      if (s.size() < 2 || s.front() != '{' || s.back() != '}')
        throw ParseError("invalid set '" + shown + "'");
      std::uint64_t bits = 0;
      auto body = trim(s.substr(1, s.size() - 2));
      while (!body.empty()) {
        auto comma = body.find(',');
        auto atom = trim(body.substr(0, comma));
        auto it = std::find(m_desc.atoms.begin(), m_desc.atoms.end(), atom);
        if (it == m_desc.atoms.end())
          throw ParseError("unknown atom '" + std::string(atom) + "'");
        bits |= 1ULL << (it - m_desc.atoms.begin());
        if (comma == std::string_view::npos) break;
        body = trim(body.substr(comma + 1));
        if (body.empty()) throw ParseError("trailing comma in set '" + shown + "'");
      }
      return SetValue{bits};
    }
    case DomainKind::Interval: {
      if (s == "bot") return IntervalValue::bot();
      if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ParseError("invalid interval '" + shown + "'");
      auto body = s.substr(1, s.size() - 2);
      auto comma = body.find(',');
      if (comma == std::string_view::npos)
        throw ParseError("invalid interval '" + shown + "'");
      auto bound = [&](std::string_view b) -> Bound {
        b = trim(b);
        if (b == "-inf") return Bound::minus_inf();
        if (b == "inf" || b == "+inf") return Bound::plus_inf();
        auto v = parse_int<std::int64_t>(b);
        if (!v) throw ParseError("invalid interval bound '" + std::string(b) + "'");
        return Bound::finite(*v);
      };
      Bound lo = bound(body.substr(0, comma));
      Bound hi = bound(body.substr(comma + 1));
      if (lo.inf > 0 || hi.inf < 0 || hi < lo)
        throw ParseError("malformed interval '" + shown + "'");
      return IntervalValue::of(lo, hi);
    }
  }
  throw ParseError("unreachable");
}

std::string Lattice::print(const Value& v) const {
  check(v);
  switch (m_desc.kind) {
    case DomainKind::Chain:
      return std::to_string(std::get<ChainValue>(v).index);
    case DomainKind::NatInf: {
      const auto& n = std::get<NatValue>(v);
      return n.infinite ? "inf" : std::to_string(n.n);
    }
    case DomainKind::Powerset: {
      std::vector<std::string> names;
      const auto bits = std::get<SetValue>(v).bits;
      for (std::size_t i = 0; i < m_desc.atoms.size(); ++i)
        if (bits & (1ULL << i)) names.push_back(m_desc.atoms[i]);
      std::sort(names.begin(), names.end());
      std::string out = "{";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ",";
        out += names[i];
      }
      return out + "}";
    }
    case DomainKind::Interval: {
      const auto& i = std::get<IntervalValue>(v);
      if (i.empty) return "bot";
      return "[" + print_bound(i.lo) + "," + print_bound(i.hi) + "]";
    }
  }
  return {};
}

}  // namespace tsolve
