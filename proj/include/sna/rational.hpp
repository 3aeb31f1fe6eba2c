#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace sna {

/// Exact arbitrary-precision rational. All engine arithmetic is exact;
/// floating point never enters the pipeline.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders "p" when the denominator is 1, otherwise "p/q" (q > 0).
std::string to_string(const Rational& r);

/// Parses the literal forms `3`, `0.25`, and `3/4`, each with an optional
/// leading sign. Decimals are converted to exact fractions. Returns nullopt
/// on anything else (including division by zero).
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace sna
