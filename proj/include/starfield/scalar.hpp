#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace starfield {

/// Exact rational coefficient. GMP keeps it in lowest terms with a positive
/// denominator after every arithmetic operation.
using Scalar = mpq_class;

std::string to_string(const Scalar& value);

/// Parses "p" or "p/q" (optional leading sign). Throws ParseError.
Scalar parse_scalar(std::string_view text);

Scalar factorial(int n);
Scalar binomial(int n, int k);

} // namespace starfield
