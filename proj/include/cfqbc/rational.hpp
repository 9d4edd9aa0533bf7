#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cfqbc {

/// Exact rational scalar. Expression templates are disabled so that `auto`
/// and generic code over `T` behave the same as for `double`.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Parses "p/q", an integer, or a finite decimal ("0.125", "1e-3") exactly.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }
inline double to_double(double value) { return value; }

template <class T>
T half() {
  return T(1) / T(2);
}

}  // namespace cfqbc
