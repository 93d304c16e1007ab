#pragma once

#include <string>

namespace asymptotica {

// Numerical three-state verdict: a horizon-limited computation may genuinely
// be unable to decide.
enum class Verdict { yes, no, inconclusive };

inline Verdict verdict_and(Verdict a, Verdict b) {
  if (a == Verdict::no || b == Verdict::no) return Verdict::no;
  if (a == Verdict::yes && b == Verdict::yes) return Verdict::yes;
  return Verdict::inconclusive;
}

inline Verdict verdict_of(bool b) { return b ? Verdict::yes : Verdict::no; }

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "inconclusive";
  }
}

}  // namespace asymptotica
