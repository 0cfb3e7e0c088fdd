#pragma once

// Hand-rolled generators for the randomized suites. Every generator takes
// the engine explicitly so a failing case can be replayed from its seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cdpoly/cdpoly.hpp"

namespace cdpoly::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Small rational p/q with |p| <= 9 and 1 <= q <= 6.
inline Rational small_rational(Rng& rng) {
  Rational r(uniform_int(rng, -9, 9), uniform_int(rng, 1, 6));
  r.canonicalize();
  return r;
}

/// Random rational polynomial with up to `terms` terms of total degree <= max_degree.
inline RationalPolynomial random_polynomial(Rng& rng, std::size_t nvars, int max_degree, int terms) {
  RationalPolynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(nvars, 0);
    int budget = uniform_int(rng, 0, max_degree);
    for (std::size_t i = 0; i < nvars && budget > 0; ++i) {
      const int take = i + 1 == nvars ? budget : uniform_int(rng, 0, budget);
      e[i] = take;
      budget -= take;
    }
    std::shuffle(e.begin(), e.end(), rng);
    p.add_term(Monomial(e), small_rational(rng));
  }
  return p;
}

/// Random polynomial whose leading form has degree exactly `degree`.
inline RationalPolynomial random_polynomial_of_degree(Rng& rng, std::size_t nvars, int degree, int terms) {
  for (;;) {
    RationalPolynomial p = random_polynomial(rng, nvars, degree, terms);
    const auto tops = monomials_of_degree(nvars, degree);
    p.add_term(tops[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(tops.size()) - 1))],
               Rational(uniform_int(rng, 1, 5)));
    if (p.degree() == degree) return p;
  }
}

/// Random orthogonal matrix: eigenvectors of a random symmetric matrix,
/// with a random reflection so both orientations occur.
inline RealMatrix random_orthogonal(Rng& rng, std::size_t n) {
  RealMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) s(i, j) = s(j, i) = uniform_real(rng, -1.0, 1.0);
  RealMatrix o = symmetric_eigen(s).vectors;
  // One polar (Newton-Schulz) step pulls O^T O to the identity at unit roundoff.
  o = scaled(o, 1.5) - scaled(o * o.transpose() * o, 0.5);
  if (uniform_int(rng, 0, 1) == 1)
    for (std::size_t i = 0; i < n; ++i) o(i, 0) = -o(i, 0);
  return o;
}

/// One random orthogonal rotation per column of the basis.
inline std::vector<RealMatrix> random_gauge(Rng& rng, const RigidBasis& basis) {
  std::vector<RealMatrix> out;
  for (const auto& col : basis.columns) out.push_back(random_orthogonal(rng, col.size()));
  return out;
}

/// Random point in [-1, 1]^d.
inline std::vector<double> random_point(Rng& rng, std::size_t d) {
  std::vector<double> p(d);
  for (auto& v : p) v = uniform_real(rng, -1.0, 1.0);
  return p;
}

inline double max_abs_coef(const FloatPolynomial& p) { return p.max_abs_coefficient(); }

}  // namespace cdpoly::testing
