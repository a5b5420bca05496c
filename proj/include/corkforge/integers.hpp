#ifndef CORKFORGE_INTEGERS_HPP
#define CORKFORGE_INTEGERS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace corkforge {

// Exact arithmetic only: arbitrary-precision integers and rationals.
// et_off keeps plain value semantics (no expression templates), which makes
// the types safe to use with std containers, std::optional and `auto`.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

using IntVec = std::vector<Int>;

inline int sgn(const Int& v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }

inline Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

// Floor division for a positive divisor (cpp_int's operator/ truncates
// toward zero, which is wrong for negative dividends here).
inline Int floor_div(const Int& a, const Int& b) {
  if (b <= 0) throw std::invalid_argument("floor_div requires a positive divisor");
  Int quot = a / b;
  if (a % b != 0 && a < 0) --quot;
  return quot;
}

// Smallest integer x with factor * x > bound (factor > 0).
inline Int min_strict(const Int& bound, const Int& factor) {
  return floor_div(bound, factor) + 1;
}

// Checked narrowing for JSON emission; every quantity this library serializes
// is tiny, the check only guards against corrupted inputs round-tripping.
inline std::int64_t to_int64(const Int& v) {
  if (v < std::numeric_limits<std::int64_t>::min() ||
      v > std::numeric_limits<std::int64_t>::max()) {
    throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
  }
  return v.convert_to<std::int64_t>();
}

// Lowest-term string form; the denominator is omitted when it is 1.
inline std::string rational_to_string(const Rat& r) {
  const Int num = numerator(r);
  const Int den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace corkforge

#endif  // CORKFORGE_INTEGERS_HPP
