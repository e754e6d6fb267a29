#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace nsbox {

// Exact arithmetic everywhere except the dynamics module: all box entries,
// weights, functional coefficients and certificates are mpq rationals.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// weights that are negative or do not sum to one, points outside the simplex
struct InvalidMixtureError : Error {
    using Error::Error;
};
// parameter outside its documented range (S, eps, sym index, ...)
struct ParameterError : Error {
    using Error::Error;
};
// wiring applied to the wrong number of boxes
struct ArityError : Error {
    using Error::Error;
};
// correlators that do not correspond to a valid box
struct OutsidePolytopeError : Error {
    using Error::Error;
};
// malformed rational strings / JSON / truth tables
struct ParseError : Error {
    using Error::Error;
};

// Accepts "num", "num/den", optional leading sign. Decimal input is rejected:
// callers that want exactness must not pass floats through strings.
Rat parse_rational(const std::string& s);

// Canonical form "num/den" with den > 0, lowest terms (so "3" prints "3/1").
std::string rat_string(const Rat& q);

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

}  // namespace nsbox
