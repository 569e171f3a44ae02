#pragma once

#include <string>
#include <string_view>

#include "mhsos/polynomial.hpp"

namespace mhsos {

/// Reads the text form used on the command line, e.g. "x1^3 x4^2 - 1/2 x1 x2^2 x5^2 + 3".
/// Terms are joined by '+'/'-'; a term is an optional rational coefficient followed by
/// factors `x<i>` or `x<i>^<e>` (1-based variable index), optionally separated by '*'.
/// Every term must have the blockwise degrees of `shape`.
Polynomial parse_polynomial(std::string_view text, const Shape& shape);

/// Inverse of parse_polynomial; terms in graded-lexicographic order, "0" for zero.
std::string format_polynomial(const Polynomial& p);

}  // namespace mhsos
