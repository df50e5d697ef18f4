#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pidkit {

using Rational = mpq_class;

/// Parses "num/den", an integer, or a decimal such as "0.125" or "2.5e-1".
/// Decimals are converted exactly (0.1 is 1/10, not the nearest double).
/// Throws InputError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; integers are written as "num/1".
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// log2 of a strictly positive rational, evaluated as log2(num) - log2(den)
/// so that powers of two come out exact.
double log2_of(const Rational& q);

}  // namespace pidkit
