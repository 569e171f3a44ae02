#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace mhsos {

/// Arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a plain decimal such as "-0.25".
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact binary value of a finite double.
Rational from_double(double value);

Rational factorial(unsigned n);

}  // namespace mhsos
