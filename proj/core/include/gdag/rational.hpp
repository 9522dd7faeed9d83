#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace gdag {

/// Exact rational number (GMP).
using Rational = mpq_class;

/// Parses "num/den" or an integer. Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" text; integers print without a denominator.
std::string to_string(const Rational& q);

} // namespace gdag
