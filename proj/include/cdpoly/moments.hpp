#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cdpoly/column.hpp"
#include "cdpoly/curves.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/ideal.hpp"
#include "cdpoly/linalg.hpp"
#include "cdpoly/quadrature.hpp"

namespace cdpoly {

/// Default working degree budget of the pipelines.
inline constexpr int kDefaultMaxDegree = 12;
inline constexpr int kDefaultQuadPoints = 256;

/// Moments m_0..m_N of a functional on polynomials in one variable.
struct Moments1D {
  std::vector<double> values;
  std::vector<Rational> exact;  // empty unless the moments are known exactly

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t n) const { return values.at(n); }
  bool has_exact() const { return !exact.empty(); }

  static Moments1D from_exact(std::vector<Rational> q) {
    Moments1D m;
    for (const auto& v : q) m.values.push_back(v.get_d());
    m.exact = std::move(q);
    return m;
  }

  /// Hankel matrix [m_{i+j}]_{i,j=0..k}.
  RealMatrix hankel(std::size_t k) const {
    if (2 * k >= values.size()) throw PreconditionError("not enough moments for Hankel matrix");
    RealMatrix h(k + 1, k + 1);
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = 0; j <= k; ++j) h(i, j) = values[i + j];
    return h;
  }

  bool hankel_positive(std::size_t k) const { return cholesky(hankel(k)).has_value(); }
};

/// m_n = 1/(n+1): uniform probability measure on [0,1].
inline Moments1D uniform01_moments(std::size_t n_max) {
  std::vector<Rational> q;
  for (std::size_t n = 0; n <= n_max; ++n) q.emplace_back(1, static_cast<unsigned long>(n + 1));
  return Moments1D::from_exact(std::move(q));
}

/// Normalized Lebesgue measure on [-1,1] (Legendre weight).
inline Moments1D legendre_moments(std::size_t n_max) {
  std::vector<Rational> q;
  for (std::size_t n = 0; n <= n_max; ++n)
    q.push_back(n % 2 == 0 ? Rational(1, static_cast<unsigned long>(n + 1)) : Rational(0));
  return Moments1D::from_exact(std::move(q));
}

/// Arcsine measure on [-1,1] (Chebyshev weight of the first kind): m_{2k} = C(2k,k)/4^k.
inline Moments1D chebyshev_moments(std::size_t n_max) {
  std::vector<Rational> q;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n % 2 != 0) {
      q.emplace_back(0);
      continue;
    }
    BigInt binom;
    mpz_bin_uiui(binom.get_mpz_t(), n, n / 2);
    BigInt pow4;
    mpz_ui_pow_ui(pow4.get_mpz_t(), 2, n);
    Rational v(binom, pow4);
    v.canonicalize();
    q.push_back(v);
  }
  return Moments1D::from_exact(std::move(q));
}

namespace detail {

inline BigInt double_factorial(long n) {
  BigInt r = 1;
  for (long k = n; k > 1; k -= 2) r *= k;
  return r;
}

// Raw integrals I_n = int_0^1 x^n (1+x)^{-1/2} x^{-1/2} (1-x)^{-1/2} dx.
inline std::vector<double> lemniscate_raw_integrals(std::size_t n_max, int points) {
  const GaussRule rule = gauss_jacobi_unit(points, -0.5, -0.5);
  std::vector<double> out(n_max + 1, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    double term = rule.weights[i] / std::sqrt(1.0 + x);
    for (std::size_t n = 0; n <= n_max; ++n) {
      out[n] += term;
      term *= x;
    }
  }
  return out;
}

// Coefficients of ((x + x^2)/2)^p ((x - x^2)/2)^q in powers of x, exactly.
inline std::vector<Rational> lemniscate_square_expansion(int p, int q) {
  std::vector<Rational> poly{Rational(1)};
  auto mul = [&](const std::vector<Rational>& f) {
    std::vector<Rational> out(poly.size() + f.size() - 1, Rational(0));
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) out[i + j] += poly[i] * f[j];
    poly = std::move(out);
  };
  const std::vector<Rational> plus{Rational(0), Rational(1, 2), Rational(1, 2)};
  const std::vector<Rational> minus{Rational(0), Rational(1, 2), Rational(-1, 2)};
  for (int i = 0; i < p; ++i) mul(plus);
  for (int i = 0; i < q; ++i) mul(minus);
  return poly;
}

}  // namespace detail

/// Exact circle moment L(x1^a x2^b) for the normalized arc-length measure:
/// (a-1)!!(b-1)!!/(a+b)!! when a and b are even, zero otherwise.
inline Rational circle_moment(int a, int b) {
  if (a < 0 || b < 0) throw PreconditionError("circle_moment: negative exponent");
  if (a % 2 != 0 || b % 2 != 0) return Rational(0);
  Rational r(detail::double_factorial(a - 1) * detail::double_factorial(b - 1), detail::double_factorial(a + b));
  r.canonicalize();
  return r;
}

/// m_n = L(s^n), s = x1^2 + x2^2, for the normalized arc-length measure on the
/// lemniscate, via Gauss-Jacobi quadrature of the [0,1] representation. The
/// rule is accepted only if doubling its node count moves no moment by more
/// than 1e-13.
inline Moments1D lemniscate_base_moments(std::size_t n_max, int points = kDefaultQuadPoints) {
  if (n_max > 64) throw PreconditionError("lemniscate_base_moments supports N <= 64");
  const auto coarse = detail::lemniscate_raw_integrals(n_max, points);
  const auto fine = detail::lemniscate_raw_integrals(n_max, 2 * points);
  Moments1D m;
  double worst = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double a = coarse[n] / coarse[0];
    const double b = fine[n] / fine[0];
    worst = std::max(worst, std::abs(a - b));
    m.values.push_back(a);
  }
  if (worst > 1e-13) {
    throw QuadratureError("lemniscate moments not converged with " + std::to_string(points) +
                          " nodes (change on doubling " + sci(worst) + "); try --quad-points " +
                          std::to_string(2 * points));
  }
  return m;
}

/// L(x1^a x2^b) on the lemniscate from its base moments, exactly on their
/// binary values: zero unless a and b are even; otherwise x1^2 -> (s+s^2)/2
/// and x2^2 -> (s-s^2)/2 modulo the curve.
inline Rational lemniscate_moment_binary(const Moments1D& base, int a, int b) {
  if (a < 0 || b < 0) throw PreconditionError("lemniscate_moment: negative exponent");
  if (a % 2 != 0 || b % 2 != 0) return Rational(0);
  const auto coeffs = detail::lemniscate_square_expansion(a / 2, b / 2);
  if (coeffs.size() > base.size()) throw PreconditionError("lemniscate_moment: base moments too short");
  Rational sum(0);
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    if (sgn(coeffs[n]) != 0) sum += coeffs[n] * exact_rational(base[n]);
  return sum;
}

inline double lemniscate_moment(const Moments1D& base, int a, int b) {
  return lemniscate_moment_binary(base, a, b).get_d();
}

/// Moments of L^{j,k}(q) = L(x1^{2j} x2^{2k} q(s)), j,k in {0,1}, exactly on
/// the binary values of the base moments.
inline std::vector<Rational> lemniscate_weighted_binary(const Moments1D& base, int j, int k, std::size_t n_max) {
  const auto w = detail::lemniscate_square_expansion(j, k);
  if (n_max + w.size() > base.size()) throw PreconditionError("lemniscate_weighted_moments: base too short");
  std::vector<Rational> m;
  for (std::size_t n = 0; n <= n_max; ++n) {
    Rational sum(0);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (sgn(w[i]) != 0) sum += w[i] * exact_rational(base[n + i]);
    m.push_back(sum);
  }
  return m;
}

inline Moments1D lemniscate_weighted_moments(const Moments1D& base, int j, int k, std::size_t n_max) {
  Moments1D m;
  for (const auto& v : lemniscate_weighted_binary(base, j, k, n_max)) m.values.push_back(v.get_d());
  return m;
}

/// Explicit moment values keyed by monomial.
struct MomentTable {
  std::size_t nvars = 0;
  std::map<Monomial, double, GrevlexDescending> entries;
};

inline nlohmann::json to_json(const MomentTable& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [m, v] : t.entries) {
    entries.push_back({{"exps", std::vector<int>(m.exponents().begin(), m.exponents().end())}, {"value", v}});
  }
  return {{"nvars", t.nvars}, {"entries", std::move(entries)}};
}

/// Accepts numeric values or rational strings such as "1/3".
inline MomentTable moment_table_from_json(const nlohmann::json& j) {
  MomentTable t;
  t.nvars = j.at("nvars").get<std::size_t>();
  for (const auto& e : j.at("entries")) {
    Monomial m(e.at("exps").get<std::vector<int>>());
    if (m.nvars() != t.nvars) throw DimensionError("moment entry arity does not match nvars");
    const auto& v = e.at("value");
    double value = 0.0;
    if (v.is_string()) {
      Rational q(v.get<std::string>(), 10);
      q.canonicalize();
      value = q.get_d();
    } else {
      value = v.get<double>();
    }
    t.entries[m] = value;
  }
  return t;
}

/// Linear functional L on polynomials, given by cached monomial moments and
/// an ideal V contained in ker L. Built once; evaluation is read-only.
class MomentFunctional {
 public:
  enum class Kind { CircleExact, Lemniscate, Tensor1D, Table };

  /// Normalized arc length on the unit circle; exact rational moments.
  static MomentFunctional circle(int degree_budget = 2 * kDefaultMaxDegree + 2) {
    MomentFunctional f(Kind::CircleExact, 2, std::make_shared<const Ideal>(circle_ideal()), degree_budget);
    for (int deg = 0; deg <= degree_budget; ++deg) {
      for (const auto& m : monomials_of_degree(2, deg)) {
        Rational q = circle_moment(m[0], m[1]);
        f.exact_.emplace(m, q);
        f.table_.emplace(m, q.get_d());
      }
    }
    return f;
  }

  /// Normalized arc length on the Bernoulli lemniscate.
  static MomentFunctional lemniscate(int degree_budget = 2 * kDefaultMaxDegree + 2,
                                     int quad_points = kDefaultQuadPoints) {
    MomentFunctional f(Kind::Lemniscate, 2, std::make_shared<const Ideal>(lemniscate_ideal()), degree_budget);
    f.base_ = lemniscate_base_moments(static_cast<std::size_t>(degree_budget), quad_points);
    for (int deg = 0; deg <= degree_budget; ++deg) {
      for (const auto& m : monomials_of_degree(2, deg)) {
        Rational q = lemniscate_moment_binary(*f.base_, m[0], m[1]);
        f.table_.emplace(m, q.get_d());
        f.binary_.emplace(m, std::move(q));
      }
    }
    return f;
  }

  /// L(x1^a x2^b) = L1(x^a) L2(x^b), with the zero ideal.
  static MomentFunctional tensor(const Moments1D& l1, const Moments1D& l2) {
    const int budget = static_cast<int>(std::min(l1.size(), l2.size())) - 1;
    if (budget < 0) throw PreconditionError("tensor_functional: empty moment sequence");
    MomentFunctional f(Kind::Tensor1D, 2, std::make_shared<const Ideal>(Ideal::zero(2)), budget);
    const bool exact = l1.has_exact() && l2.has_exact();
    for (int deg = 0; deg <= budget; ++deg) {
      for (const auto& m : monomials_of_degree(2, deg)) {
        const auto a = static_cast<std::size_t>(m[0]), b = static_cast<std::size_t>(m[1]);
        f.table_.emplace(m, l1[a] * l2[b]);
        if (exact) f.exact_.emplace(m, Rational(l1.exact[a] * l2.exact[b]));
      }
    }
    return f;
  }

  /// One-variable functional with the zero ideal.
  static MomentFunctional univariate(const Moments1D& l) {
    MomentFunctional f(Kind::Table, 1, std::make_shared<const Ideal>(Ideal::zero(1)),
                       static_cast<int>(l.size()) - 1);
    for (std::size_t n = 0; n < l.size(); ++n) {
      Monomial m(std::vector<int>{static_cast<int>(n)});
      f.table_.emplace(m, l[n]);
      if (l.has_exact()) f.exact_.emplace(m, l.exact[n]);
    }
    return f;
  }

  /// Explicit table; moments are looked up after reduction modulo `ideal`.
  static MomentFunctional table(const MomentTable& t, std::shared_ptr<const Ideal> ideal) {
    if (ideal->nvars() != t.nvars) throw DimensionError("moment table and ideal differ in nvars");
    int budget = 0;
    for (const auto& [m, v] : t.entries) budget = std::max(budget, m.degree());
    MomentFunctional f(Kind::Table, t.nvars, std::move(ideal), budget);
    for (const auto& [m, v] : t.entries) f.table_.emplace(m, v);
    return f;
  }

  Kind kind() const { return kind_; }
  std::size_t nvars() const { return nvars_; }
  const Ideal& ideal() const { return *ideal_; }
  std::shared_ptr<const Ideal> ideal_ptr() const { return ideal_; }
  int degree_budget() const { return budget_; }
  bool has_exact() const { return !exact_.empty(); }
  const std::optional<Moments1D>& base_moments() const { return base_; }

  double moment(const Monomial& m) const {
    auto it = table_.find(m);
    if (it == table_.end()) {
      throw PreconditionError("moment of degree " + std::to_string(m.degree()) +
                              " is not available (budget " + std::to_string(budget_) + ")");
    }
    return it->second;
  }

  /// L(p), reducing p modulo the associated ideal first. With exact moments
  /// the float coefficients are taken at their binary values and the result
  /// is rounded once.
  double operator()(const FloatPolynomial& p) const {
    check(p.nvars());
    return evaluate_binary(to_rational(p)).get_d();
  }

  /// Exact L(p) in rational mode; only for functionals with exact moments.
  Rational exact(const RationalPolynomial& p) const {
    check(p.nvars());
    if (exact_.empty()) throw PreconditionError("functional has no exact moments");
    const RationalPolynomial r = ideal_->normal_form(p);
    Rational sum(0);
    for (const auto& [m, c] : r.terms()) {
      auto it = exact_.find(m);
      if (it == exact_.end()) throw PreconditionError("exact moment not available");
      sum += c * it->second;
    }
    return sum;
  }

  /// Entrywise application to a matrix of polynomials.
  RealMatrix apply(const Matrix<FloatPolynomial>& m) const {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = (*this)(m(i, j));
    return out;
  }

  /// L applied to a column, as a (size x 1) matrix.
  RealMatrix apply(const FloatColumn& c) const {
    RealMatrix out(c.size(), 1);
    for (std::size_t i = 0; i < c.size(); ++i) out(i, 0) = (*this)(c[i]);
    return out;
  }

  /// L(P Q^T).
  RealMatrix gram(const FloatColumn& p, const FloatColumn& q) const {
    std::vector<RationalPolynomial> pr, qr;
    for (const auto& e : p) pr.push_back(to_rational(e));
    for (const auto& e : q) qr.push_back(to_rational(e));
    RealMatrix out(p.size(), q.size());
    for (std::size_t i = 0; i < pr.size(); ++i)
      for (std::size_t j = 0; j < qr.size(); ++j) out(i, j) = evaluate_binary(pr[i] * qr[j]).get_d();
    return out;
  }

 private:
  MomentFunctional(Kind kind, std::size_t nvars, std::shared_ptr<const Ideal> ideal, int budget)
      : kind_(kind), nvars_(nvars), ideal_(std::move(ideal)), budget_(budget) {}

  // Exact value of L on a polynomial with exact coefficients: exact moments
  // when known, then moments derived exactly from binary base values, then
  // the binary values of the stored doubles.
  Rational evaluate_binary(const RationalPolynomial& p) const {
    if (has_exact()) return exact(p);
    const RationalPolynomial r = ideal_->normal_form(p);
    Rational sum(0);
    for (const auto& [m, c] : r.terms()) {
      auto it = binary_.find(m);
      sum += c * (it != binary_.end() ? it->second : Rational(moment(m)));
    }
    return sum;
  }

  void check(std::size_t nvars) const {
    if (nvars != nvars_) throw DimensionError("functional applied to polynomial with wrong nvars");
  }

  Kind kind_;
  std::size_t nvars_;
  std::shared_ptr<const Ideal> ideal_;
  int budget_;
  std::map<Monomial, double, GrevlexDescending> table_;
  std::map<Monomial, Rational, GrevlexDescending> exact_;
  std::map<Monomial, Rational, GrevlexDescending> binary_;
  std::optional<Moments1D> base_;
};

inline MomentFunctional tensor_functional(const Moments1D& l1, const Moments1D& l2) {
  return MomentFunctional::tensor(l1, l2);
}

struct PositivityReport {
  bool positive = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::size_t size = 0;
};

/// Moment Gram matrix over the standard monomials of degree <= kmax.
inline PositivityReport positivity_check(const MomentFunctional& l, int kmax) {
  std::vector<FloatPolynomial> basis;
  for (int k = 0; k <= kmax; ++k)
    for (const auto& m : l.ideal().standard_monomials(k)) basis.push_back(FloatPolynomial::term(m, 1.0));
  RealMatrix g(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = l(basis[i] * basis[j]);
  const auto eig = symmetric_eigen(g);
  PositivityReport r;
  r.size = basis.size();
  r.min_eigenvalue = eig.values.front();
  r.max_eigenvalue = eig.values.back();
  r.positive = r.min_eigenvalue > 1e-14 * std::abs(r.max_eigenvalue);
  return r;
}

}  // namespace cdpoly
