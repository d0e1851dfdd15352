// Brute-force interval-algebra oracle, independent of the shipped tables.
//
// Intervals are pairs of integer endpoints in 0..8 with start < end. Three
// intervals have at most six distinct endpoints, so nine points are enough
// to realize every endpoint ordering; enumerating all triples therefore
// recovers the full composition table from first principles.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qsr/relations.hpp"

namespace qsr_test {

struct Interval {
  int s = 0;
  int e = 0;
};

inline std::vector<Interval> all_intervals(int max_point = 8) {
  std::vector<Interval> out;
  for (int s = 0; s <= max_point; ++s)
    for (int e = s + 1; e <= max_point; ++e) out.push_back({s, e});
  return out;
}

// The unique base relation holding between two concrete intervals,
// determined purely by endpoint comparisons.
inline qsr::Atom ia_relation(const Interval& a, const Interval& b) {
  const qsr::Calculus& calc = qsr::Calculus::ia();
  auto atom = [&](const char* name) { return *calc.find(name); };
  if (a.s == b.s && a.e == b.e) return atom("=");
  if (a.e < b.s) return atom("<");
  if (a.s > b.e) return atom(">");
  if (a.e == b.s) return atom("m");
  if (a.s == b.e) return atom("mi");
  if (a.s == b.s) return a.e < b.e ? atom("s") : atom("si");
  if (a.e == b.e) return a.s > b.s ? atom("f") : atom("fi");
  if (a.s > b.s && a.e < b.e) return atom("d");
  if (a.s < b.s && a.e > b.e) return atom("di");
  if (a.s < b.s && a.e > b.s && a.e < b.e) return atom("o");
  return atom("oi");  // a.s > b.s && a.s < b.e && a.e > b.e
}

// compose(r1, r2) recomputed by enumeration: every relation r3 witnessed by
// some triple (x, y, z) with r1(x, y) and r2(y, z).
inline qsr::RelationSet ia_compose_bruteforce(qsr::Atom r1, qsr::Atom r2) {
  static const std::vector<Interval> intervals = all_intervals();
  uint16_t bits = 0;
  for (const Interval& x : intervals)
    for (const Interval& y : intervals) {
      if (!(ia_relation(x, y) == r1)) continue;
      for (const Interval& z : intervals) {
        if (!(ia_relation(y, z) == r2)) continue;
        bits = static_cast<uint16_t>(bits | ia_relation(x, z).code());
      }
    }
  return {qsr::CalculusId::ia, bits};
}

}  // namespace qsr_test
