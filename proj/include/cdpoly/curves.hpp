#pragma once

#include "cdpoly/ideal.hpp"
#include "cdpoly/poly_io.hpp"

namespace cdpoly {

/// x1^2 + x2^2 - 1.
inline RationalPolynomial circle_generator() { return parse_polynomial<Rational>("x1^2 + x2^2 - 1", 2); }

/// (x1^2 + x2^2)^2 - x1^2 + x2^2 (Bernoulli lemniscate).
inline RationalPolynomial lemniscate_generator() {
  return parse_polynomial<Rational>("(x1^2 + x2^2)^2 - x1^2 + x2^2", 2);
}

// Both curves use the principal ideal of their defining polynomial.
inline Ideal circle_ideal() { return Ideal::groebner({circle_generator()}); }
inline Ideal lemniscate_ideal() { return Ideal::groebner({lemniscate_generator()}); }

}  // namespace cdpoly
