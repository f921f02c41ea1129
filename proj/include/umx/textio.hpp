#ifndef UMX_TEXTIO_HPP
#define UMX_TEXTIO_HPP

#include <string>
#include <vector>

#include "umx/polynomial.hpp"

// Canonical text form for words and polynomials, round-trip stable:
//
//   poly   := [sign] term { sign term }
//   term   := [coeff] { factor }            (at least one of the two)
//   coeff  := rat | rat 'i' | 'i' | '(' rat [sign rat 'i'] ')'
//   factor := 'u'N ['^' int] | name ['^' nat] | 'b[' name { name } ']' ['^' nat] | '1'
//   rat    := integer [ '/' integer ]
//
// Factors are separated by whitespace (or '*'); 'u'N denotes the N-th unitary
// variable, bare names denote constant-algebra generators, and 'b[x y]'
// denotes the basis word xy. The printer emits reduced words in canonical
// term order with explicit coefficients.

namespace umx {

std::string mono_str(const Algebra& alg, const Monomial& m);
std::string poly_str(const Polynomial& p);
std::string tensor_str(const TensorPoly& t);

Polynomial parse_poly(const Algebra& alg, const std::string& text);

}  // namespace umx

#endif
