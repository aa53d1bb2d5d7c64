#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tsolve {

/*
 * Abstract values. Every value belongs to one of four lattice families; the
 * representation is canonical, so structural equality coincides with lattice
 * equality and the defaulted ordering can serve as a map key order.
 */

struct ChainValue {
  std::uint32_t index = 0;
  auto operator<=>(const ChainValue&) const = default;
};

/// Subset of the atoms of a powerset lattice, bit i = i-th declared atom.
struct SetValue {
  std::uint64_t bits = 0;
  auto operator<=>(const SetValue&) const = default;
};

/// Element of N extended with infinity.
struct NatValue {
  std::uint64_t n = 0;
  bool infinite = false;

  static NatValue inf() { return {0, true}; }
  auto operator<=>(const NatValue&) const = default;
};

/// Interval bound: a finite integer or one of the two infinities.
struct Bound {
  std::int64_t value = 0;
  std::int8_t inf = 0;  // -1: -inf, 0: finite, +1: +inf

  static Bound finite(std::int64_t v) { return {v, 0}; }
  static Bound minus_inf() { return {0, -1}; }
  static Bound plus_inf() { return {0, 1}; }
  bool is_finite() const { return inf == 0; }

  bool operator==(const Bound&) const = default;
  std::strong_ordering operator<=>(const Bound& o) const {
    if (inf != o.inf) return inf <=> o.inf;
    if (inf != 0) return std::strong_ordering::equal;
    return value <=> o.value;
  }
};

/// Either empty (bottom) or [lo, hi] with lo <= hi.
struct IntervalValue {
  bool empty = true;
  Bound lo;
  Bound hi;

  static IntervalValue bot() { return {}; }
  static IntervalValue of(Bound lo, Bound hi);
  auto operator<=>(const IntervalValue&) const = default;
};

using Value = std::variant<ChainValue, SetValue, NatValue, IntervalValue>;

enum class DomainKind { Chain, Powerset, NatInf, Interval };

struct LatticeDescriptor {
  DomainKind kind = DomainKind::NatInf;
  std::uint32_t chain_size = 0;    // Chain only
  std::vector<std::string> atoms;  // Powerset only

  static LatticeDescriptor chain(std::uint32_t n);
  static LatticeDescriptor powerset(std::vector<std::string> atoms);
  static LatticeDescriptor natinf();
  static LatticeDescriptor interval();

  /// Validates the descriptor, throwing UsageError when malformed.
  void validate() const;
  /// Textual form as used after the `lattice`/`scheme` keywords.
  std::string to_string() const;

  bool operator==(const LatticeDescriptor&) const = default;
};

/**
 * Operations of a complete lattice equipped with widening and narrowing.
 *
 * Chain and Powerset are finite: widen is join and narrow is meet. NatInf
 * widens any strict increase to infinity and narrows only from infinity.
 * Interval widening sends each unstable bound to the matching infinity and
 * narrowing refines only infinite bounds.
 *
 * Every binary operation throws UsageError when an argument does not belong
 * to this lattice. Instances are immutable.
 */
class Lattice {
 public:
  explicit Lattice(LatticeDescriptor descriptor);

  const LatticeDescriptor& descriptor() const { return m_desc; }
  DomainKind kind() const { return m_desc.kind; }

  Value bot() const;
  Value top() const;

  bool contains(const Value& v) const;

  bool leq(const Value& a, const Value& b) const;
  bool eq(const Value& a, const Value& b) const;
  Value join(const Value& a, const Value& b) const;
  Value meet(const Value& a, const Value& b) const;
  Value widen(const Value& a, const Value& b) const;
  Value narrow(const Value& a, const Value& b) const;
  /// Narrow when b is below a, widen otherwise.
  Value warrow(const Value& a, const Value& b) const;

  /// Successor: saturating at top on chains, inf stays inf on NatInf,
  /// [l+1,u+1] on intervals. Undefined on powersets (throws UsageError).
  Value inc(const Value& a) const;
  /// Predecessor, dual of inc; saturates at 0 on chains and NatInf.
  Value dec(const Value& a) const;
  /// Shift by k; on chains and NatInf negative results clamp to 0.
  Value add_const(const Value& a, std::int64_t k) const;
  bool has_arithmetic() const { return m_desc.kind != DomainKind::Powerset; }

  bool is_finite() const;
  /// All values; only for finite lattices.
  std::vector<Value> enumerate() const;
  /// Number of values; only for finite lattices.
  std::uint64_t size() const;
  /// Length of the longest strictly increasing chain; finite lattices only.
  std::uint64_t height() const;

  Value parse(std::string_view text) const;
  std::string print(const Value& v) const;

 private:
  void check(const Value& v) const;
  void check(const Value& a, const Value& b) const;

  LatticeDescriptor m_desc;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// Builds the lattice operations for a well-formed descriptor.
LatticePtr make_domain(LatticeDescriptor descriptor);

}  // namespace tsolve
