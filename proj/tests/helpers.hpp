#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "tsolve/eqsys.hpp"
#include "tsolve/lattice.hpp"

namespace tsolve {

// Readable gtest failure output for values.
inline void PrintTo(const Value& v, std::ostream* os) {
  std::visit(
      [os](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ChainValue>) *os << "chain " << x.index;
        if constexpr (std::is_same_v<T, SetValue>) *os << "set 0x" << std::hex << x.bits << std::dec;
        if constexpr (std::is_same_v<T, NatValue>) {
          if (x.infinite) *os << "inf"; else *os << x.n;
        }
        if constexpr (std::is_same_v<T, IntervalValue>) {
          if (x.empty) { *os << "bot"; return; }
          auto b = [os](const Bound& b) {
            if (b.inf < 0) *os << "-inf"; else if (b.inf > 0) *os << "inf"; else *os << b.value;
          };
          *os << "["; b(x.lo); *os << ","; b(x.hi); *os << "]";
        }
      },
      v);
}

inline void PrintTo(const VarId& v, std::ostream* os) {
  *os << v.name;
  if (v.context) { *os << ":"; PrintTo(*v.context, os); }
}

}  // namespace tsolve

namespace testutil {

using namespace tsolve;

inline Value nat(std::uint64_t n) { return NatValue{n, false}; }
inline Value inf() { return NatValue::inf(); }
inline Value ch(std::uint32_t i) { return ChainValue{i}; }
inline Value iv(std::int64_t lo, std::int64_t hi) {
  return IntervalValue::of(Bound::finite(lo), Bound::finite(hi));
}
inline Value ibot() { return IntervalValue::bot(); }
inline VarId var(const std::string& n) { return VarId(n); }

inline std::string data_path(const std::string& file) {
  return std::string(TSOLVE_DATA_DIR) + "/" + file;
}

inline std::string read_data(const std::string& file) {
  std::ifstream in(data_path(file));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Example 3: if y1 > 5 then 1 + y2 else y1, with y1 read a second time in
// the else branch.
inline Tree example3_tree() {
  return Tree::query(VarId("y1"), [](const Value& d1) {
    const auto& n1 = std::get<NatValue>(d1);
    if (n1.infinite || n1.n > 5)
      return Tree::query(VarId("y2"), [](const Value& d2) {
        const auto& n2 = std::get<NatValue>(d2);
        return Tree::answer(n2.infinite ? NatValue::inf() : NatValue{n2.n + 1, false});
      });
    return Tree::query(VarId("y1"), [](const Value& d) { return Tree::answer(d); });
  });
}

}  // namespace testutil
