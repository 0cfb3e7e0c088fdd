#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cdpoly/errors.hpp"
#include "cdpoly/monomial.hpp"
#include "cdpoly/rational.hpp"

namespace cdpoly {

/// Sparse multivariate polynomial with coefficients in K (exact rationals or doubles).
///
/// Terms are kept in descending grevlex order, so `terms().begin()` is the
/// leading term. Zero coefficients are never stored; in float mode anything
/// with magnitude at most float_zero_tolerance() (default kFloatZeroTol)
/// counts as zero and is dropped by every arithmetic operation.
template <Coefficient K>
class Polynomial {
 public:
  using coefficient_type = K;
  using Terms = std::map<Monomial, K, GrevlexDescending>;
  using traits = coeff_traits<K>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const K& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t index) {
    Polynomial p(nvars);
    p.add_term(Monomial::variable(nvars, index), K(1));
    return p;
  }

  static Polynomial term(const Monomial& m, const K& c) {
    Polynomial p(m.nvars());
    p.add_term(m, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

  const Monomial& leading_monomial() const {
    if (terms_.empty()) throw PreconditionError("leading monomial of zero polynomial");
    return terms_.begin()->first;
  }
  const K& leading_coefficient() const {
    if (terms_.empty()) throw PreconditionError("leading coefficient of zero polynomial");
    return terms_.begin()->second;
  }

  K coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? K(0) : it->second;
  }

  /// Adds c*m in place. Used while building a value; operators never mutate.
  void add_term(const Monomial& m, const K& c) {
    if (m.nvars() != nvars_) throw DimensionError("monomial arity does not match polynomial");
    if (traits::negligible(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (traits::negligible(it->second)) terms_.erase(it);
    }
  }

  /// Removes the term at m, if present.
  void erase_term(const Monomial& m) { terms_.erase(m); }

  double max_abs_coefficient() const {
    double best = 0.0;
    for (const auto& [m, c] : terms_) best = std::max(best, std::abs(traits::to_double(c)));
    return best;
  }

  /// Copy with every coefficient of magnitude <= tol removed (float mode).
  Polynomial chopped(double tol) const {
    Polynomial out(nvars_);
    for (const auto& [m, c] : terms_) {
      if (std::abs(traits::to_double(c)) > tol) out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
  }

  double evaluate(std::span<const double> point) const {
    if (point.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = traits::to_double(c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (m[i] != 0) t *= std::pow(point[i], m[i]);
      }
      sum += t;
    }
    return sum;
  }

  Polynomial operator-() const {
    Polynomial out(nvars_);
    for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, K(-c));
    return out;
  }

  Polynomial& operator+=(const Polynomial& q) {
    check_compatible(q);
    for (const auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& q) {
    check_compatible(q);
    for (const auto& [m, c] : q.terms_) add_term(m, K(-c));
    return *this;
  }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    p.check_compatible(q);
    Polynomial out(p.nvars_);
    for (const auto& [mp, cp] : p.terms_) {
      for (const auto& [mq, cq] : q.terms_) {
        K c = cp * cq;
        out.accumulate(mp * mq, c);
      }
    }
    out.prune();
    return out;
  }

  friend Polynomial operator*(const K& s, const Polynomial& p) { return p.scaled(s); }
  friend Polynomial operator*(const Polynomial& p, const K& s) { return p.scaled(s); }

  Polynomial scaled(const K& s) const {
    Polynomial out(nvars_);
    if (traits::negligible(s)) return out;
    for (const auto& [m, c] : terms_) {
      K v = c * s;
      if (!traits::negligible(v)) out.terms_.emplace_hint(out.terms_.end(), m, v);
    }
    return out;
  }

  /// c * m * this, used by reduction steps.
  Polynomial shifted(const Monomial& m, const K& c) const {
    Polynomial out(nvars_);
    for (const auto& [mt, ct] : terms_) {
      K v = ct * c;
      if (!traits::negligible(v)) out.terms_.emplace(mt * m, v);
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const Polynomial& q) const {
    if (q.nvars_ != nvars_) throw DimensionError("polynomials have different numbers of variables");
  }

  // Adds without pruning; prune() must follow.
  void accumulate(const Monomial& m, const K& c) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it = traits::negligible(it->second) ? terms_.erase(it) : std::next(it);
    }
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

using RationalPolynomial = Polynomial<Rational>;
using FloatPolynomial = Polynomial<double>;

/// Exact rational polynomial to float mode.
inline FloatPolynomial to_float(const RationalPolynomial& p) {
  FloatPolynomial out(p.nvars());
  for (const auto& [m, c] : p.terms()) out.add_term(m, c.get_d());
  return out;
}

/// Float polynomial to the exact rationals its doubles represent.
inline RationalPolynomial to_rational(const FloatPolynomial& p) {
  RationalPolynomial out(p.nvars());
  for (const auto& [m, c] : p.terms()) out.add_term(m, Rational(c));
  return out;
}

enum class Slot { x, y };

/// Embeds a d-variable polynomial into 2d variables: x-slot uses indices
/// 0..d-1, y-slot uses d..2d-1.
template <Coefficient K>
Polynomial<K> tensor_embed(const Polynomial<K>& p, Slot slot) {
  const std::size_t d = p.nvars();
  Polynomial<K> out(2 * d);
  const std::size_t offset = slot == Slot::x ? 0 : d;
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e(2 * d, 0);
    for (std::size_t i = 0; i < d; ++i) e[offset + i] = m[i];
    out.add_term(Monomial(std::move(e)), c);
  }
  return out;
}

/// p(x, y) -> p(y, x) for a polynomial in 2d variables.
template <Coefficient K>
Polynomial<K> swap_slots(const Polynomial<K>& p) {
  if (p.nvars() % 2 != 0) throw DimensionError("swap_slots needs an even number of variables");
  const std::size_t d = p.nvars() / 2;
  Polynomial<K> out(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> e(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      e[i] = m[d + i];
      e[d + i] = m[i];
    }
    out.add_term(Monomial(std::move(e)), c);
  }
  return out;
}

/// Substitutes a numeric point into one slot of a 2d-variable polynomial,
/// leaving a polynomial in the other d variables.
inline FloatPolynomial substitute_slot(const FloatPolynomial& p, Slot slot,
                                       std::span<const double> point) {
  if (p.nvars() != 2 * point.size()) throw DimensionError("substitution point has wrong dimension");
  const std::size_t d = point.size();
  const std::size_t fixed = slot == Slot::x ? 0 : d;
  const std::size_t kept = slot == Slot::x ? d : 0;
  FloatPolynomial out(d);
  for (const auto& [m, c] : p.terms()) {
    double v = c;
    std::vector<int> e(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (m[fixed + i] != 0) v *= std::pow(point[i], m[fixed + i]);
      e[i] = m[kept + i];
    }
    out.add_term(Monomial(std::move(e)), v);
  }
  return out;
}

/// Polynomial in one fewer "scalar" variable: q(s) for a polynomial s, via Horner.
/// `reduce` is applied after each multiplication (identity when no ideal is involved).
template <Coefficient K, class Reduce>
Polynomial<K> compose_univariate(std::span<const K> coeffs, const Polynomial<K>& s, Reduce&& reduce) {
  Polynomial<K> acc(s.nvars());
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = reduce(acc * s);
    acc += Polynomial<K>::constant(s.nvars(), coeffs[i]);
  }
  return acc;
}

}  // namespace cdpoly
