#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdpoly/column.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/polynomial.hpp"

namespace cdpoly {

namespace detail {

template <Coefficient K>
Polynomial<K> make_monic(const Polynomial<K>& p) {
  if (p.is_zero()) return p;
  K inv = K(1) / p.leading_coefficient();
  Polynomial<K> out = p.scaled(inv);
  // Pin the leading coefficient to exactly one in float mode.
  Polynomial<K> fixed(out.nvars());
  bool first = true;
  for (const auto& [m, c] : out.terms()) {
    fixed.add_term(m, first ? K(1) : c);
    first = false;
  }
  return fixed;
}

/// Full reduction of p by a list of monic polynomials (no ordering assumption).
template <Coefficient K>
Polynomial<K> reduce_by(Polynomial<K> work, const std::vector<Polynomial<K>>& divisors) {
  Polynomial<K> rem(work.nvars());
  while (!work.is_zero()) {
    const Monomial m = work.leading_monomial();
    const K c = work.leading_coefficient();
    const Polynomial<K>* hit = nullptr;
    for (const auto& g : divisors) {
      if (g.leading_monomial().divides(m)) {
        hit = &g;
        break;
      }
    }
    if (hit == nullptr) {
      rem.add_term(m, c);
      work.erase_term(m);
      continue;
    }
    work -= hit->shifted(m.quotient(hit->leading_monomial()), c);
    work.erase_term(m);
  }
  return rem;
}

inline RationalPolynomial s_polynomial(const RationalPolynomial& f, const RationalPolynomial& g) {
  const Monomial l = f.leading_monomial().lcm(g.leading_monomial());
  return f.shifted(l.quotient(f.leading_monomial()), Rational(1) / f.leading_coefficient()) -
         g.shifted(l.quotient(g.leading_monomial()), Rational(1) / g.leading_coefficient());
}

inline bool lt_descending(const RationalPolynomial& a, const RationalPolynomial& b) {
  return grevlex_greater(a.leading_monomial(), b.leading_monomial());
}

}  // namespace detail

struct QuotientProfile {
  std::vector<int> d_V;                         // d_V[k] for k = 0..kmax
  std::optional<int> kappa;                     // nullopt means infinite
  std::vector<std::vector<Monomial>> standard;  // degree-k standard monomials, descending

  bool kappa_infinite() const { return !kappa.has_value(); }
};

/// Polynomial ideal stored through its reduced Groebner basis (grevlex).
/// Immutable once built; all queries are const.
class Ideal {
 public:
  /// Zero ideal in nvars variables (empty basis).
  static Ideal zero(std::size_t nvars) {
    Ideal v;
    v.nvars_ = nvars;
    return v;
  }

  /// Buchberger with the coprime-leading-monomial criterion, followed by
  /// minimization and inter-reduction to the unique reduced basis.
  static Ideal groebner(std::vector<RationalPolynomial> generators) {
    if (generators.empty()) throw PreconditionError("groebner needs at least one generator");
    Ideal v;
    v.nvars_ = generators.front().nvars();
    for (const auto& g : generators) {
      if (g.nvars() != v.nvars_) throw DimensionError("generators differ in nvars");
    }
    v.generators_ = generators;

    std::vector<RationalPolynomial> basis;
    for (const auto& g : generators) {
      if (!g.is_zero()) basis.push_back(detail::make_monic(g));
    }
    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 1; j < basis.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);

    while (!pairs.empty()) {
      auto [i, j] = pairs.front();
      pairs.pop_front();
      if (basis[i].leading_monomial().coprime(basis[j].leading_monomial())) continue;
      RationalPolynomial r = detail::reduce_by(detail::s_polynomial(basis[i], basis[j]), basis);
      if (r.is_zero()) continue;
      basis.push_back(detail::make_monic(r));
      for (std::size_t k = 0; k + 1 < basis.size(); ++k) pairs.emplace_back(k, basis.size() - 1);
    }

    // Minimal basis: drop elements whose leading monomial is divisible by another's.
    std::vector<RationalPolynomial> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
        if (i == j) continue;
        const auto& li = basis[i].leading_monomial();
        const auto& lj = basis[j].leading_monomial();
        if (lj.divides(li) && (!(li == lj) || j < i)) redundant = true;
      }
      if (!redundant) minimal.push_back(basis[i]);
    }
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      std::vector<RationalPolynomial> others;
      for (std::size_t j = 0; j < minimal.size(); ++j)
        if (j != i) others.push_back(minimal[j]);
      minimal[i] = detail::make_monic(detail::reduce_by(minimal[i], others));
    }
    std::sort(minimal.begin(), minimal.end(), detail::lt_descending);

    for (const auto& g : minimal) {
      if (g.degree() == 0) {
        v.proper_ = false;
        minimal = {RationalPolynomial::constant(v.nvars_, Rational(1))};
        break;
      }
    }
    v.basis_ = std::move(minimal);
    for (const auto& g : v.basis_) v.basis_float_.push_back(to_float(g));
    return v;
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<RationalPolynomial>& generators() const { return generators_; }
  const std::vector<RationalPolynomial>& basis() const { return basis_; }
  bool is_proper() const { return proper_; }
  bool is_zero_ideal() const { return basis_.empty(); }

  void require_proper() const {
    if (!proper_) throw ImproperIdealError();
  }

  /// Remainder of p on division by the Groebner basis. In float mode terms
  /// below float_zero_tolerance() are dropped at every step; a positive `tol`
  /// applies a final cleanup at that threshold.
  template <Coefficient K>
  Polynomial<K> normal_form(const Polynomial<K>& p, double tol = 0.0) const {
    if (p.nvars() != nvars_) throw DimensionError("normal_form: polynomial and ideal differ in nvars");
    if constexpr (std::same_as<K, Rational>) {
      return detail::reduce_by(p, basis_);
    } else {
      // Float coefficients are exact binary rationals: reduce them exactly and
      // round once, so the division steps add no rounding of their own.
      FloatPolynomial r = to_float(detail::reduce_by(to_rational(p), basis_));
      return tol > 0.0 ? r.chopped(tol) : r;
    }
  }

  template <Coefficient K>
  ColumnPolynomial<K> normal_form(const ColumnPolynomial<K>& c) const {
    return c.map([&](const Polynomial<K>& e) { return normal_form(e); });
  }

  bool is_standard(const Monomial& m) const {
    for (const auto& g : basis_)
      if (g.leading_monomial().divides(m)) return false;
    return true;
  }

  std::vector<Monomial> standard_monomials(int degree) const {
    std::vector<Monomial> out;
    for (auto& m : monomials_of_degree(nvars_, degree))
      if (is_standard(m)) out.push_back(std::move(m));
    return out;
  }

  /// d_V(k) = number of degree-k standard monomials (the order is degree-compatible).
  QuotientProfile quotient_profile(int kmax) const {
    require_proper();
    QuotientProfile prof;
    for (int k = 0; k <= kmax; ++k) {
      prof.standard.push_back(standard_monomials(k));
      prof.d_V.push_back(static_cast<int>(prof.standard.back().size()));
    }
    if (prof.d_V[static_cast<std::size_t>(kmax)] == 0) {
      int last = 0;
      for (int k = 0; k <= kmax; ++k)
        if (prof.d_V[static_cast<std::size_t>(k)] != 0) last = k;
      prof.kappa = last;
    }
    return prof;
  }

 private:
  Ideal() = default;

  std::size_t nvars_ = 0;
  bool proper_ = true;
  std::vector<RationalPolynomial> generators_;
  std::vector<RationalPolynomial> basis_;
  std::vector<FloatPolynomial> basis_float_;
};

inline Ideal groebner(std::vector<RationalPolynomial> generators) {
  return Ideal::groebner(std::move(generators));
}

template <Coefficient K>
Polynomial<K> normal_form(const Polynomial<K>& p, const Ideal& v) {
  return v.normal_form(p);
}

/// p == q modulo V (float mode: remainder within tol).
template <Coefficient K>
bool em_v(const Polynomial<K>& p, const Polynomial<K>& q, const Ideal& v, double tol = kFloatZeroTol) {
  Polynomial<K> r = v.normal_form(p - q);
  if constexpr (std::same_as<K, Rational>) {
    return r.is_zero();
  } else {
    return r.max_abs_coefficient() <= tol;
  }
}

template <Coefficient K>
bool em_v_column(const ColumnPolynomial<K>& p, const ColumnPolynomial<K>& q, const Ideal& v,
                 double tol = kFloatZeroTol) {
  if (p.size() != q.size()) throw DimensionError("em_v_column: column sizes differ");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!em_v(p[i], q[i], v, tol)) return false;
  return true;
}

inline QuotientProfile quotient_profile(const Ideal& v, int kmax) { return v.quotient_profile(kmax); }

/// V_2 = V (x) P_d + P_d (x) V in 2d variables. The union of the x- and
/// y-copies of the basis is already a Groebner basis; Buchberger is rerun to
/// confirm that nothing is added.
inline Ideal double_ideal(const Ideal& v) {
  v.require_proper();
  if (v.is_zero_ideal()) return Ideal::zero(2 * v.nvars());
  std::vector<RationalPolynomial> gens;
  for (const auto& g : v.basis()) gens.push_back(tensor_embed(g, Slot::x));
  for (const auto& g : v.basis()) gens.push_back(tensor_embed(g, Slot::y));
  Ideal doubled = Ideal::groebner(gens);
  std::vector<RationalPolynomial> expected = gens;
  std::sort(expected.begin(), expected.end(), detail::lt_descending);
  if (!(doubled.basis() == expected)) {
    throw VerificationError("Buchberger added elements to the doubled basis");
  }
  return doubled;
}

}  // namespace cdpoly
