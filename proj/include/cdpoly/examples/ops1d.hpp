#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cdpoly/errors.hpp"
#include "cdpoly/moments.hpp"
#include "cdpoly/polynomial.hpp"

namespace cdpoly {

/// Relative pivot h_k / m_{2k} below which inexact moments no longer
/// determine the next orthogonal polynomial.
inline constexpr double kHankelPivotFloor = 1e-15;

/// Orthonormal polynomials p_0..p_n of one variable with
/// x p_k = a_k p_{k+1} + b_k p_k + a_{k-1} p_{k-1}.
struct OrthoFamily1D {
  std::vector<RationalPolynomial> monic;  // pi_k, exact
  std::vector<Rational> norms;            // h_k = L(pi_k^2), exact
  std::vector<FloatPolynomial> p;         // pi_k / sqrt(h_k)
  std::vector<double> a;                  // a_k = sqrt(h_{k+1}/h_k), k < n
  std::vector<double> b;                  // b_k = L(x pi_k^2)/h_k, k <= n-1
  std::vector<Rational> b_exact;
  bool exact_moments = false;

  int degree() const { return static_cast<int>(p.size()) - 1; }
};

namespace detail {

inline Rational apply_moments(const std::vector<Rational>& m, const RationalPolynomial& q) {
  Rational sum(0);
  for (const auto& [mon, c] : q.terms()) {
    const auto e = static_cast<std::size_t>(mon[0]);
    if (e >= m.size()) throw PreconditionError("ops1d: moment of degree " + std::to_string(e) + " not supplied");
    sum += c * m[e];
  }
  return sum;
}

}  // namespace detail

/// Monic Gram-Schmidt on 1, x, ..., x^n in exact arithmetic on the given
/// rational moments. `exact_moments` says whether they are the true moments
/// or rationalized approximations; only the latter get the pivot floor.
inline OrthoFamily1D ops1d(const std::vector<Rational>& m, int n, bool exact_moments) {
  if (n < 0) throw PreconditionError("ops1d: negative degree");
  if (m.size() < static_cast<std::size_t>(2 * n + 2)) {
    throw PreconditionError("ops1d: degree " + std::to_string(n) + " needs moments through " +
                            std::to_string(2 * n + 1));
  }
  OrthoFamily1D fam;
  fam.exact_moments = exact_moments;
  const RationalPolynomial x = RationalPolynomial::variable(1, 0);
  for (int k = 0; k <= n; ++k) {
    RationalPolynomial pi = RationalPolynomial::term(Monomial(std::vector<int>{k}), Rational(1));
    const RationalPolynomial xk = pi;
    for (int l = 0; l < k; ++l) {
      const auto lu = static_cast<std::size_t>(l);
      const Rational c = detail::apply_moments(m, xk * fam.monic[lu]) / fam.norms[lu];
      pi -= fam.monic[lu].scaled(c);
    }
    const Rational h = detail::apply_moments(m, pi * pi);
    const double ratio = h.get_d() / std::abs(m[static_cast<std::size_t>(2 * k)].get_d());
    if (sgn(h) <= 0 || (!fam.exact_moments && !(ratio >= kHankelPivotFloor))) {
      throw DegeneracyError("Hankel matrix is numerically singular (pivot ratio " + sci(ratio) + ")", k);
    }
    fam.monic.push_back(pi);
    fam.norms.push_back(h);
    fam.p.push_back(to_float(pi).scaled(1.0 / std::sqrt(h.get_d())));
  }
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    fam.a.push_back(std::sqrt(Rational(fam.norms[ku + 1] / fam.norms[ku]).get_d()));
    const Rational bk = detail::apply_moments(m, x * fam.monic[ku] * fam.monic[ku]) / fam.norms[ku];
    fam.b_exact.push_back(bk);
    fam.b.push_back(bk.get_d());
  }
  return fam;
}

/// Inexact moments are taken at their binary values, so rounding enters only
/// through the final normalization.
inline OrthoFamily1D ops1d(const Moments1D& moments, int n) {
  if (moments.has_exact()) return ops1d(moments.exact, n, true);
  std::vector<Rational> m;
  for (double v : moments.values) m.push_back(exact_rational(v));
  return ops1d(m, n, false);
}

/// Largest defect of x pi_k = pi_{k+1} + b_k pi_k + (h_k / h_{k-1}) pi_{k-1},
/// computed exactly; zero when the family is consistent.
inline Rational monic_recurrence_defect(const OrthoFamily1D& fam) {
  const RationalPolynomial x = RationalPolynomial::variable(1, 0);
  Rational worst(0);
  for (std::size_t k = 0; k + 1 < fam.monic.size(); ++k) {
    RationalPolynomial r = x * fam.monic[k] - fam.monic[k + 1] - fam.monic[k].scaled(fam.b_exact[k]);
    if (k > 0) r -= fam.monic[k - 1].scaled(fam.norms[k] / fam.norms[k - 1]);
    for (const auto& [mon, c] : r.terms()) worst = std::max(worst, Rational(abs(c)));
  }
  return worst;
}

/// Max coefficient of x p_k - a_k p_{k+1} - b_k p_k - a_{k-1} p_{k-1} in
/// floating point, divided by max(1, max coefficient of x p_k).
inline double float_recurrence_defect(const OrthoFamily1D& fam) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const FloatPolynomial x = FloatPolynomial::variable(1, 0);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < fam.p.size(); ++k) {
    const FloatPolynomial xp = x * fam.p[k];
    FloatPolynomial r = xp - fam.p[k + 1].scaled(fam.a[k]) - fam.p[k].scaled(fam.b[k]);
    if (k > 0) r -= fam.p[k - 1].scaled(fam.a[k - 1]);
    worst = std::max(worst, r.max_abs_coefficient() / std::max(1.0, xp.max_abs_coefficient()));
  }
  return worst;
}

/// Exact classical CD identity in two variables (x, y):
/// sum_k pi_k(x) pi_k(y) / h_k * (x - y) = (pi_{n+1}(x) pi_n(y) - pi_n(x) pi_{n+1}(y)) / h_n.
/// Returns the residual polynomial, which is zero when the identity holds.
inline RationalPolynomial classical_cd_defect(const OrthoFamily1D& fam, int n) {
  if (n + 1 > fam.degree()) throw PreconditionError("classical CD identity at n needs pi_{n+1}");
  const auto nu = static_cast<std::size_t>(n);
  RationalPolynomial kernel(2);
  for (std::size_t k = 0; k <= nu; ++k) {
    kernel += (tensor_embed(fam.monic[k], Slot::x) * tensor_embed(fam.monic[k], Slot::y)).scaled(1 / fam.norms[k]);
  }
  const RationalPolynomial diff = RationalPolynomial::variable(2, 0) - RationalPolynomial::variable(2, 1);
  const RationalPolynomial rhs = (tensor_embed(fam.monic[nu + 1], Slot::x) * tensor_embed(fam.monic[nu], Slot::y) -
                                  tensor_embed(fam.monic[nu], Slot::x) * tensor_embed(fam.monic[nu + 1], Slot::y))
                                     .scaled(1 / fam.norms[nu]);
  return diff * kernel - rhs;
}

}  // namespace cdpoly
