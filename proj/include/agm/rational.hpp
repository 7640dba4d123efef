#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace agm {

/// Structural misuse of the algebra: mismatched dimensions, bad slots, unknown kinds.
struct structural_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Input data that violates a declared symmetry or range.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An internal postcondition failed; signals an implementation or convention error.
struct invariant_violation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Exact rational number, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Canonical p/q. Prefer this over the two-argument mpq_class constructor,
/// which does not reduce.
inline Rational frac(long p, long q) {
  if (q == 0) throw validation_error("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Parses "p" or "p/q" with decimal integers.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  const auto bad = [&] { return validation_error("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  const auto slash = s.find('/');
  const auto digits_ok = [](std::string_view part, bool allow_sign) {
    if (allow_sign && !part.empty() && (part.front() == '-' || part.front() == '+'))
      part.remove_prefix(1);
    if (part.empty()) return false;
    for (char ch : part)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits_ok(s, true)) throw bad();
  } else {
    std::string_view view(s);
    if (!digits_ok(view.substr(0, slash), true) || !digits_ok(view.substr(slash + 1), false))
      throw bad();
  }
  // mpq_set_str rejects a leading '+'
  if (s.front() == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw bad();
  if (q.get_den() == 0) throw validation_error("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace agm
