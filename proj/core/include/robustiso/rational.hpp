#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace robustiso {

using Rational = mpq_class;

/// Parses `p/q`, an integer, or a plain decimal such as `-2.75` into an exact
/// rational. Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical text form: `p/q` in lowest terms, or `p` for integers.
std::string to_string(const Rational& value);

mpz_class floor(const Rational& value);
mpz_class ceil(const Rational& value);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

double to_double(const Rational& value);

inline Rational to_rational(long long value) { return Rational(static_cast<long>(value)); }
inline const Rational& to_rational(const Rational& value) { return value; }

/// Exact conversion of a finite double (binary fraction) to a rational.
Rational from_double(double value);

}  // namespace robustiso
