#pragma once

// Exact rational arithmetic. Every oracle, closed form and equality check in
// the library runs on Rational; doubles appear only on Monte Carlo paths and
// in human-facing output.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace corrsamp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact value of the IEEE double (every finite double is dyadic).
Rational rational_from_double(double x);

// Accepts "p/q", an integer literal, or a decimal literal, with optional
// sign. Throws InvalidInputError on anything else or on q == 0.
Rational parse_rational(const std::string& text);

// Canonical "p/q" with q >= 1, e.g. "0/1", "-1/2", "43/64".
std::string rational_to_string(const Rational& r);

double rational_to_double(const Rational& r);

// r^e for e >= 0.
Rational rational_pow(const Rational& r, unsigned e);

}  // namespace corrsamp
