#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace aqicert {

/// Exact rational scalar used for distances, radii, weights and constants.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Parses "p/q", "p" or a finite decimal such as "0.25". Throws ParseError.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// Converts an integer that is known to fit; throws InternalError otherwise.
std::int64_t to_int64(const Integer& z);

}  // namespace aqicert
