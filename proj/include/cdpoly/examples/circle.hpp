#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cdpoly/curves.hpp"
#include "cdpoly/examples/common.hpp"

namespace cdpoly {

inline constexpr int kCircleMaxDegree = 12;

/// Closed-form orthonormal columns on the unit circle: Q_0 = [1] and
/// Q_k = sqrt(2) [Re z^k; Im z^k] with z = x1 + i x2.
struct CircleBasis {
  std::vector<RationalColumn> unnormalized;  // R_0 = [1], R_k = [Re z^k; Im z^k]
  RigidBasis basis;
};

/// Re z^k and Im z^k by binomial expansion.
inline RationalColumn circle_real_imag(int k) {
  RationalPolynomial re(2), im(2);
  for (int m = 0; m <= k; ++m) {
    BigInt binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(m));
    // i^m contributes (-1)^{m/2} to the real part (m even), (-1)^{(m-1)/2} to the imaginary part (m odd).
    const int sign = ((m / 2) % 2 == 0) ? 1 : -1;
    const Monomial mon(std::vector<int>{k - m, m});
    (m % 2 == 0 ? re : im).add_term(mon, Rational(binom * sign));
  }
  return RationalColumn({re, im});
}

inline CircleBasis circle_closed_form(int n) {
  if (n < 0 || n > kCircleMaxDegree + 1) throw PreconditionError("circle basis degree out of range");
  const ScopedZeroTolerance working(kWorkingZeroTol);
  CircleBasis cb;
  cb.basis.ideal = std::make_shared<const Ideal>(circle_ideal());
  cb.basis.source = RigidBasis::Source::ClosedForm;
  cb.unnormalized.push_back(RationalColumn({RationalPolynomial::constant(2, Rational(1))}));
  cb.basis.columns.push_back(FloatColumn({FloatPolynomial::constant(2, 1.0)}));
  for (int k = 1; k <= n; ++k) {
    cb.unnormalized.push_back(circle_real_imag(k));
    cb.basis.columns.push_back(to_float(cb.unnormalized.back()).map(
        [](const FloatPolynomial& p) { return p.scaled(std::numbers::sqrt2); }));
  }
  return cb;
}

/// The displayed matrices: A_{0,1} = [1/sqrt2, 0], A_{0,2} = [0, 1/sqrt2],
/// A_{k,1} = diag(1/2, 1/2), A_{k,2} = [[0, 1/2], [-1/2, 0]] for k >= 1.
inline RealMatrix circle_expected_a(int k, std::size_t j) {
  const double r = 1.0 / std::numbers::sqrt2;
  if (k == 0) return j == 0 ? RealMatrix{{r, 0.0}} : RealMatrix{{0.0, r}};
  return j == 0 ? RealMatrix{{0.5, 0.0}, {0.0, 0.5}} : RealMatrix{{0.0, 0.5}, {-0.5, 0.0}};
}

/// Same matrices for the unnormalized columns R_k; all rational.
/// Returns (forward, backward) with x_j R_k == F R_{k+1} + G R_{k-1}.
inline std::pair<Matrix<Rational>, Matrix<Rational>> circle_exact_recurrence(int k, std::size_t j) {
  const Rational h(1, 2), z(0);
  Matrix<Rational> fwd, bwd;
  if (k == 0) {
    fwd = j == 0 ? Matrix<Rational>{{Rational(1), z}} : Matrix<Rational>{{z, Rational(1)}};
  } else {
    fwd = j == 0 ? Matrix<Rational>{{h, z}, {z, h}} : Matrix<Rational>{{z, h}, {-h, z}};
  }
  if (k == 1) {
    bwd = j == 0 ? Matrix<Rational>{{h}, {z}} : Matrix<Rational>{{z}, {h}};
  } else if (k >= 2) {
    bwd = j == 0 ? Matrix<Rational>{{h, z}, {z, h}} : Matrix<Rational>{{z, -h}, {h, z}};
  }
  return {fwd, bwd};
}

/// Exact checks on the unnormalized columns: L(R_k R_l^T) = delta (1 at k=0,
/// 1/2 otherwise), the recurrence, and the CD identity with K_n = 1 + 2 sum R_k^T R_k.
/// Returns the number of failing identities (zero on success).
inline int circle_exact_failures(const CircleBasis& cb, const MomentFunctional& l, int n) {
  const Ideal& v = *cb.basis.ideal;
  const Ideal v2 = double_ideal(v);
  int failures = 0;
  const auto& r = cb.unnormalized;
  for (int k = 0; k <= n + 1; ++k) {
    for (int m = 0; m <= k; ++m) {
      const auto& rk = r[static_cast<std::size_t>(k)];
      const auto& rm = r[static_cast<std::size_t>(m)];
      for (std::size_t a = 0; a < rk.size(); ++a)
        for (std::size_t b = 0; b < rm.size(); ++b) {
          Rational want(0);
          if (k == m && a == b) want = k == 0 ? Rational(1) : Rational(1, 2);
          if (l.exact(rk[a] * rm[b]) != want) ++failures;
        }
    }
  }
  for (int k = 0; k <= n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto [fwd, bwd] = circle_exact_recurrence(k, j);
      RationalColumn d = RationalPolynomial::variable(2, j) * r[ku] - column_matmul(fwd, r[ku + 1]);
      if (k > 0) d = d - column_matmul(bwd, r[ku - 1]);
      for (const auto& e : v.normal_form(d))
        if (!e.is_zero()) ++failures;
    }
  }
  // With Q = sqrt2 R for k >= 1 every product Q(x)^T Q(y) is rational.
  auto qq = [](const RationalColumn& p, const RationalColumn& q, bool scale) {
    RationalPolynomial t = tensor_dot(p, q);
    return scale ? t.scaled(Rational(2)) : t;
  };
  for (int nn = 0; nn <= n; ++nn) {
    const auto nu = static_cast<std::size_t>(nn);
    RationalPolynomial kernel(4);
    for (std::size_t k = 0; k <= nu; ++k) kernel += qq(r[k], r[k], k > 0);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto [fwd, bwd] = circle_exact_recurrence(nn, j);
      // A_{n,j} Q_{n+1} = sqrt2 fwd R_{n+1} at n >= 1 and fwd R_1 at n = 0; paired
      // with Q_n this gives a factor 2 exactly when n >= 1.
      const RationalColumn aq = column_matmul(fwd, r[nu + 1]);
      const RationalPolynomial diff = RationalPolynomial::variable(4, j) - RationalPolynomial::variable(4, 2 + j);
      const RationalPolynomial defect =
          diff * kernel - qq(aq, r[nu], nn > 0) + qq(r[nu], aq, nn > 0);
      if (!v2.normal_form(defect).is_zero()) ++failures;
    }
  }
  return failures;
}

inline std::vector<std::vector<double>> circle_samples(int count = 8) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < count; ++i) {
    const double t = 0.3 + 2.0 * std::numbers::pi * i / count;
    out.push_back({std::cos(t), std::sin(t)});
  }
  return out;
}

struct CircleOptions {
  int max_degree = 5;
  bool rational = false;
  PipelineTolerances tol{};
};

/// Closed-form circle basis through degree N+1, recurrence and CD data
/// through degree N, compared with the displayed matrices.
inline PipelineReport circle_pipeline(const CircleOptions& opt) {
  const int n = opt.max_degree;
  if (n < 0 || n > kCircleMaxDegree) throw PreconditionError("circle pipeline supports 0 <= N <= 12");
  PipelineReport rep;
  rep.pipeline = "circle";
  rep.config = {{"max_degree", n}, {"mode", opt.rational ? "rational" : "float"}};
  const MomentFunctional l = MomentFunctional::circle(2 * n + 4);
  const CircleBasis cb = circle_closed_form(n + 1);
  const RigidBasis& basis = cb.basis;
  const RecurrenceData rec = extract_recurrence(l, basis);

  double dev = 0.0;
  for (int k = 0; k <= n; ++k)
    for (std::size_t j = 0; j < 2; ++j)
      dev = std::max(dev, max_abs_diff(rec.A[j][static_cast<std::size_t>(k)], circle_expected_a(k, j)));
  rep.checks.push_back(make_check("A matches displayed matrices", dev, 1e-12));
  rep.checks.push_back(make_check("B = 0", max_abs_b(rec), 1e-12));
  rep.checks.push_back(make_flag("x1^2 + x2^2 == 1 mod V",
                                 em_v(parse_polynomial<Rational>("x1^2 + x2^2", 2),
                                      RationalPolynomial::constant(2, Rational(1)), *basis.ideal)));

  run_standard_checks(rep, l, basis, rec, n, opt.tol, circle_samples());

  // The closed form is a per-degree rotation of the Gram-Schmidt basis.
  const RigidBasis computed = gram_schmidt(l, candidate_columns(l.ideal(), n + 1), n + 1);
  double rot = 0.0;
  for (std::size_t k = 0; k < basis.columns.size(); ++k) {
    const RealMatrix o = l.gram(basis[k], computed[k]);
    rot = std::max(rot, max_abs_diff(o * o.transpose(), RealMatrix::identity(o.rows())));
  }
  rep.checks.push_back(make_check("closed form is a rotation of Gram-Schmidt basis", rot, 1e-9));

  if (opt.rational) {
    rep.checks.push_back(make_check("exact identities (rational)", circle_exact_failures(cb, l, n), 0.0));
  }
  rep.basis = basis;
  rep.recurrence = rec;
  return rep;
}

}  // namespace cdpoly
