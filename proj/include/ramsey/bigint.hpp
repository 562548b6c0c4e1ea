#pragma once

// Exact arithmetic used everywhere: arbitrary-precision integers and
// rationals. No floating point enters any membership or witness decision.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace ramsey {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int numer(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denom(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return denom(r) == 1; }

inline Int int_lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline Int int_pow(const Int& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

// Ceiling of a nonnegative rational.
inline Int rat_ceil(const Rat& r) {
  Int q = numer(r) / denom(r);
  if (q * denom(r) != numer(r) && r > 0) ++q;
  return q;
}

// Fits-in-int64 check before narrowing window-sized values.
inline bool fits_i64(const Int& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_i64(const Int& v) { return static_cast<std::int64_t>(v); }

inline std::string to_string(const Int& v) { return v.str(); }

}  // namespace ramsey
