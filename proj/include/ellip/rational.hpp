#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ellip {

using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// "p/q" or "p"; always in lowest terms.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p", "-p", "p/q". Throws InvalidArgument on malformed input or a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// Best rational approximation of x with denominator at most max_den,
/// by continued fractions.
Rational rational_approximation(double x, std::int64_t max_den);

} // namespace ellip
