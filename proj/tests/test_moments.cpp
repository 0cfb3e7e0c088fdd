#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

namespace cdpoly {
namespace {

using std::numbers::pi;

// Uniform trapezoid rule for the normalized circle measure; exact for
// trigonometric polynomials of degree below the node count.
double trapezoid_circle_moment(int a, int b, int nodes = 4096) {
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double t = 2.0 * pi * i / nodes;
    sum += std::pow(std::cos(t), a) * std::pow(std::sin(t), b);
  }
  return sum / nodes;
}

// Arc-length moments of the lemniscate through the parametrization
// phi(t) = (cos t, sin t cos t) / (1 + sin^2 t) with |phi'(t)| = (1 + sin^2 t)^{-1/2}.
// The integrand is smooth and periodic, so the trapezoid rule converges geometrically.
double parametrized_lemniscate_moment(int a, int b, int nodes = 4096) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double t = 2.0 * pi * i / nodes;
    const double s = std::sin(t), c = std::cos(t);
    const double q = 1.0 + s * s;
    const double w = 1.0 / std::sqrt(q);
    num += w * std::pow(c / q, a) * std::pow(s * c / q, b);
    den += w;
  }
  return num / den;
}

// I_n = int_0^1 x^n (1+x)^{-1/2} (x(1-x))^{-1/2} dx after x = sin^2 theta:
// 2 int_0^{pi/2} sin^{2n} theta (1 + sin^2 theta)^{-1/2} d theta, midpoint rule.
double substituted_raw_integral(int n, int nodes = 2000) {
  double sum = 0.0;
  const double h = 0.5 * pi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double s = std::sin((i + 0.5) * h);
    sum += std::pow(s * s, n) / std::sqrt(1.0 + s * s);
  }
  return 2.0 * h * sum;
}

double beta_function(double p, double q) { return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q)); }

// Sum of c * m_alpha over the terms of p, without reducing p modulo the ideal.
double raw_apply(const MomentFunctional& l, const FloatPolynomial& p) {
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) sum += c * l.moment(m);
  return sum;
}

TEST(CircleMoment, ClosedFormValues) {
  EXPECT_EQ(circle_moment(0, 0), Rational(1));
  EXPECT_EQ(circle_moment(1, 0), Rational(0));
  EXPECT_EQ(circle_moment(2, 0), Rational(1, 2));
  EXPECT_EQ(circle_moment(2, 2), Rational(1, 8));
  EXPECT_THROW(circle_moment(-1, 0), PreconditionError);
}

TEST(CircleMoment, MatchesTrapezoidOracle) {
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; a + b <= 12; ++b)
      EXPECT_NEAR(circle_moment(a, b).get_d(), trapezoid_circle_moment(a, b), 1e-13) << a << "," << b;
}

TEST(GaussJacobi, TwoPointLegendreRule) {
  const GaussRule r = gauss_jacobi(2, 0.0, 0.0);
  EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(GaussJacobi, IntegratesMonomialsAgainstBetaFunction) {
  // Oracle B(k + a + 1, b + 1) by the exact step B(x + 1, y) = B(x, y) x / (x + y),
  // seeded from lgamma at small arguments where it is accurate.
  const std::vector<std::pair<double, double>> exponents{{-0.5, -0.5}, {0.0, 0.0}, {1.5, -0.3}, {-0.7, 2.0}};
  for (int n : {4, 16, 64}) {
    for (const auto& [a, b] : exponents) {
      const GaussRule r = gauss_jacobi_unit(n, a, b);
      long double exact = beta_function(a + 1.0, b + 1.0);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        long double sum = 0.0L;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
          sum += static_cast<long double>(r.weights[i]) * std::pow(static_cast<long double>(r.nodes[i]), k);
        EXPECT_LE(static_cast<double>(std::fabs(sum - exact) / exact), 1e-13)
            << "n=" << n << " a=" << a << " b=" << b << " k=" << k;
        exact *= (k + a + 1.0L) / (k + a + b + 2.0L);
      }
    }
  }
}

TEST(GaussJacobi, RejectsBadInput) {
  EXPECT_THROW(gauss_jacobi(0, 0.0, 0.0), QuadratureError);
  EXPECT_THROW(gauss_jacobi(4, -1.0, 0.0), QuadratureError);
}

TEST(LemniscateMoments, BaseMomentsAgreeWithSubstitutionOracle) {
  const Moments1D m = lemniscate_base_moments(10);
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_GT(m[1], 0.0);
  EXPECT_LT(m[1], 1.0);
  const double i0 = substituted_raw_integral(0);
  for (int n = 1; n <= 10; ++n) EXPECT_NEAR(m[static_cast<std::size_t>(n)], substituted_raw_integral(n) / i0, 1e-13);
  EXPECT_TRUE(m.hankel_positive(4));
}

TEST(LemniscateMoments, AgreeWithParametrizationOracle) {
  const MomentFunctional l = MomentFunctional::lemniscate(12);
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; a + b <= 12; ++b)
      EXPECT_NEAR(l.moment(Monomial({a, b})), parametrized_lemniscate_moment(a, b), 1e-13) << a << "," << b;
}

TEST(LemniscateMoments, ParityAndSquareSum) {
  const Moments1D base = lemniscate_base_moments(8);
  EXPECT_EQ(lemniscate_moment(base, 1, 0), 0.0);
  EXPECT_EQ(lemniscate_moment(base, 1, 1), 0.0);
  EXPECT_EQ(lemniscate_moment(base, 3, 2), 0.0);
  EXPECT_NEAR(lemniscate_moment(base, 2, 0) + lemniscate_moment(base, 0, 2), base[1], 1e-16);
}

TEST(LemniscateMoments, UnconvergedRuleIsReported) {
  EXPECT_THROW(lemniscate_base_moments(40, 8), QuadratureError);
  EXPECT_THROW(lemniscate_base_moments(65), PreconditionError);
}

TEST(LemniscateMoments, WeightedMomentsShiftTheBase) {
  const Moments1D base = lemniscate_base_moments(10);
  // L^{1,0}(x^n) = L((x + x^2)/2 * x^n) on the base sequence.
  const Moments1D w = lemniscate_weighted_moments(base, 1, 0, 4);
  for (std::size_t n = 0; n <= 4; ++n) EXPECT_NEAR(w[n], 0.5 * (base[n + 1] + base[n + 2]), 1e-16);
}

TEST(MomentFunctional, ReductionIdentityOnEachCurve) {
  // x1^2 == (s + s^2)/2 modulo the lemniscate ideal.
  const Ideal lem = lemniscate_ideal();
  EXPECT_TRUE(em_v(parse_polynomial<Rational>("x1^2", 2),
                   parse_polynomial<Rational>("1/2*(x1^2 + x2^2 + (x1^2 + x2^2)^2)", 2), lem));
  EXPECT_TRUE(em_v(parse_polynomial<Rational>("x2^4", 2),
                   parse_polynomial<Rational>("x1^2 - x2^2 - x1^4 - 2*x1^2*x2^2", 2), lem));
  EXPECT_FALSE(em_v(parse_polynomial<Rational>("x1", 2), parse_polynomial<Rational>("x2", 2), circle_ideal()));
}

TEST(MomentFunctional, TablesAnnihilateTheIdeal) {
  testing::Rng rng(11);
  const MomentFunctional circ = MomentFunctional::circle(20);
  const MomentFunctional lem = MomentFunctional::lemniscate(20);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = FloatPolynomial::term(monomials_of_degree(2, trial % 9)[0], 1.0);
    const auto mult = to_float(testing::random_polynomial(rng, 2, 6, 3)) * m;
    EXPECT_NEAR(raw_apply(circ, mult * to_float(circle_generator())), 0.0, 1e-14);
    EXPECT_NEAR(raw_apply(lem, mult * to_float(lemniscate_generator())), 0.0, 1e-12);
  }
}

TEST(MomentFunctional, CircleGramOfFirstColumnIsIdentity) {
  const MomentFunctional l = MomentFunctional::circle(6);
  const FloatColumn q1({FloatPolynomial::variable(2, 0).scaled(std::sqrt(2.0)),
                        FloatPolynomial::variable(2, 1).scaled(std::sqrt(2.0))});
  EXPECT_LE(max_abs_diff(l.gram(q1, q1), RealMatrix::identity(2)), 1e-15);
  EXPECT_EQ(l(FloatPolynomial::constant(2, 1.0)), 1.0);
  EXPECT_EQ(max_abs(l.apply(FloatColumn({to_float(circle_generator())}))), 0.0);
}

TEST(MomentFunctional, ExactModeMatchesFloatMode) {
  const MomentFunctional l = MomentFunctional::circle(10);
  const auto p = parse_polynomial<Rational>("x1^4*x2^2 - 3*x1^2 + 1/7", 2);
  EXPECT_EQ(l.exact(p), Rational(1, 16) - Rational(3, 2) + Rational(1, 7));
  EXPECT_NEAR(l(to_float(p)), l.exact(p).get_d(), 1e-15);
}

TEST(MomentFunctional, BudgetIsEnforced) {
  const MomentFunctional l = MomentFunctional::circle(4);
  EXPECT_THROW(l.moment(Monomial({6, 0})), PreconditionError);
  EXPECT_THROW(l(FloatPolynomial::variable(3, 0)), DimensionError);
}

TEST(MomentFunctional, TensorMarginals) {
  const Moments1D a = legendre_moments(8), b = uniform01_moments(8);
  const MomentFunctional l = MomentFunctional::tensor(a, b);
  EXPECT_EQ(l(FloatPolynomial::constant(2, 1.0)), 1.0);
  for (int k = 0; k <= 8; ++k) {
    EXPECT_DOUBLE_EQ(l.moment(Monomial({k, 0})), a[static_cast<std::size_t>(k)]);
    EXPECT_DOUBLE_EQ(l.moment(Monomial({0, k})), b[static_cast<std::size_t>(k)]);
  }
  EXPECT_EQ(legendre_moments(4).exact[2], Rational(1, 3));
  EXPECT_EQ(chebyshev_moments(4).exact[2], Rational(1, 2));
}

TEST(Positivity, CurvesArePositiveSignedTableIsNot) {
  EXPECT_TRUE(positivity_check(MomentFunctional::circle(10), 4).positive);
  EXPECT_TRUE(positivity_check(MomentFunctional::lemniscate(10), 4).positive);
  MomentTable t;
  t.nvars = 1;
  t.entries[Monomial({0})] = 1.0;
  t.entries[Monomial({1})] = 0.0;
  t.entries[Monomial({2})] = -1.0;
  const auto rep = positivity_check(MomentFunctional::table(t, std::make_shared<const Ideal>(Ideal::zero(1))), 1);
  EXPECT_FALSE(rep.positive);
  EXPECT_LT(rep.min_eigenvalue, 0.0);
}

TEST(MomentTable, JsonRoundTrip) {
  const MomentTable t = point_moment_table({{1.0, 0.5}, {-0.25, 2.0}}, {0.3, 0.7}, 3);
  const MomentTable back = moment_table_from_json(to_json(t));
  EXPECT_EQ(back.nvars, 2u);
  ASSERT_EQ(back.entries.size(), t.entries.size());
  for (const auto& [m, v] : t.entries) EXPECT_EQ(back.entries.at(m), v);
}

TEST(MomentTable, MalformedJsonThrows) {
  EXPECT_ANY_THROW(moment_table_from_json(nlohmann::json{{"nvars", 2}}));
  EXPECT_ANY_THROW(moment_table_from_json(
      nlohmann::json{{"nvars", 2}, {"entries", {{{"exps", {1, 2, 3}}, {"value", 1.0}}}}}));
}

}  // namespace
}  // namespace cdpoly
