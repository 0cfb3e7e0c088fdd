#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace cdpoly {
namespace {

MomentFunctional four_point_functional(const Ideal& v) {
  const MomentTable t = point_moment_table({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, {0.1, 0.2, 0.3, 0.4}, 8);
  return MomentFunctional::table(t, std::make_shared<const Ideal>(v));
}

TEST(CandidateColumns, ShapesFollowStandardMonomials) {
  EXPECT_EQ(candidate_columns(circle_ideal(), 2).columns[2].size(), 2u);
  EXPECT_EQ(candidate_columns(lemniscate_ideal(), 3).columns[3].size(), 4u);
  const auto zero = candidate_columns(Ideal::zero(2), 1);
  EXPECT_EQ(zero.columns[1][0], FloatPolynomial::variable(2, 0));
  EXPECT_EQ(zero.columns[1][1], FloatPolynomial::variable(2, 1));
  EXPECT_FALSE(zero.truncated);
}

TEST(CandidateColumns, FiniteQuotientTruncatesWithNotice) {
  const Ideal v = Ideal::groebner({parse_polynomial<Rational>("x1^2 - 1", 2), parse_polynomial<Rational>("x2^2 - 1", 2)});
  const auto c = candidate_columns(v, 5);
  EXPECT_TRUE(c.truncated);
  EXPECT_EQ(c.columns.size(), 3u);
  ASSERT_TRUE(c.kappa.has_value());
  EXPECT_EQ(*c.kappa, 2);
  EXPECT_NE(c.notice.find("kappa_V = 2"), std::string::npos);
}

TEST(GramSchmidt, DegreeZeroIsConstantOne) {
  const MomentFunctional l = MomentFunctional::circle(4);
  const RigidBasis b = gram_schmidt(l, candidate_columns(l.ideal(), 0), 0);
  ASSERT_EQ(b.columns.size(), 1u);
  EXPECT_EQ(b[0][0], FloatPolynomial::constant(2, 1.0));
}

TEST(GramSchmidt, CircleIsOrthonormalAndARotationOfClosedForm) {
  const MomentFunctional l = MomentFunctional::circle(12);
  const RigidBasis b = gram_schmidt(l, candidate_columns(l.ideal(), 5), 5);
  EXPECT_LE(orthonormality_error(l, b), 1e-12);
  const CircleBasis cb = circle_closed_form(5);
  for (std::size_t k = 0; k <= 5; ++k) {
    const RealMatrix o = l.gram(b[k], cb.basis[k]);
    EXPECT_LE(max_abs_diff(o * o.transpose(), RealMatrix::identity(o.rows())), 1e-9) << "k=" << k;
  }
}

TEST(GramSchmidt, DegenerateFunctionalNamesTheDegree) {
  const MomentTable t = point_moment_table({{0.1, 0.2}, {0.5, -0.3}, {-0.4, 0.9}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 6);
  const MomentFunctional l = MomentFunctional::table(t, std::make_shared<const Ideal>(Ideal::zero(2)));
  try {
    gram_schmidt(l, candidate_columns(l.ideal(), 2), 2);
    FAIL() << "expected a degeneracy error";
  } catch (const DegeneracyError& e) {
    EXPECT_EQ(e.degree(), 2);
  }
}

TEST(GramSchmidt, TooFewCandidatesIsAPreconditionError) {
  const MomentFunctional l = MomentFunctional::circle(10);
  EXPECT_THROW(gram_schmidt(l, candidate_columns(l.ideal(), 2), 3), PreconditionError);
}

TEST(Recurrence, CircleClosedFormMatrices) {
  const MomentFunctional l = MomentFunctional::circle(16);
  const CircleBasis cb = circle_closed_form(6);
  const RecurrenceData rec = extract_recurrence(l, cb.basis);
  ASSERT_EQ(rec.degrees(), 6);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_LE(max_abs_diff(rec.A[0][0], RealMatrix{{r, 0.0}}), 1e-12);
  EXPECT_LE(max_abs_diff(rec.A[1][0], RealMatrix{{0.0, r}}), 1e-12);
  for (std::size_t k = 1; k <= 5; ++k) {
    EXPECT_LE(max_abs_diff(rec.A[0][k], RealMatrix{{0.5, 0.0}, {0.0, 0.5}}), 1e-12);
    EXPECT_LE(max_abs_diff(rec.A[1][k], RealMatrix{{0.0, 0.5}, {-0.5, 0.0}}), 1e-12);
  }
  EXPECT_EQ(max_abs_b(rec), 0.0);
  const RecurrenceReport rr = verify_recurrence(l.ideal(), cb.basis, rec);
  EXPECT_TRUE(rr.pass);
  EXPECT_LE(rr.max_residual, 1e-14);
}

TEST(Recurrence, PerturbedBShowsUp) {
  const MomentFunctional l = MomentFunctional::circle(12);
  const CircleBasis cb = circle_closed_form(4);
  RecurrenceData rec = extract_recurrence(l, cb.basis);
  rec.B[0][1](0, 0) += 0.1;
  const RecurrenceReport rr = verify_recurrence(l.ideal(), cb.basis, rec);
  EXPECT_FALSE(rr.pass);
  EXPECT_GE(rr.residuals[0][1], 0.09);
}

TEST(Recurrence, OneVariableLegendreMatchesClassicalCoefficients) {
  const Moments1D m = legendre_moments(24);
  const OrthoFamily1D fam = ops1d(m, 10);
  const RigidBasis b = univariate_basis(fam);
  const MomentFunctional l = MomentFunctional::univariate(m);
  const RecurrenceData rec = extract_recurrence(l, b);
  EXPECT_LE(verify_recurrence(l.ideal(), b, rec).max_residual, 1e-10);
  for (int k = 0; k < rec.degrees(); ++k) {
    // Orthonormal Legendre: a_k = (k+1)/sqrt((2k+1)(2k+3)).
    const double expected = (k + 1) / std::sqrt((2.0 * k + 1) * (2.0 * k + 3));
    EXPECT_NEAR(rec.A[0][static_cast<std::size_t>(k)](0, 0), expected, 1e-12) << "k=" << k;
  }
}

TEST(Recurrence, FiniteQuotientEndsWithOnesColumn) {
  const Ideal v = Ideal::groebner({parse_polynomial<Rational>("x1^2 - 1", 2), parse_polynomial<Rational>("x2^2 - 1", 2)});
  const MomentFunctional l = four_point_functional(v);
  const auto cand = candidate_columns(v, 2);
  const RigidBasis b = gram_schmidt(l, cand, 2);
  ASSERT_TRUE(b.terminal_degree.has_value());
  EXPECT_EQ(*b.terminal_degree, 2);
  const RecurrenceData rec = extract_recurrence(l, b);
  EXPECT_EQ(rec.degrees(), 3);
  for (std::size_t j = 0; j < 2; ++j) {
    const RealMatrix& a = rec.A[j][2];
    ASSERT_EQ(a.cols(), 1u);
    for (std::size_t i = 0; i < a.rows(); ++i) EXPECT_EQ(a(i, 0), 1.0);
  }
  EXPECT_LE(orthonormality_error(l, b), 1e-12);
  EXPECT_LE(verify_recurrence(v, b, rec).max_residual, 1e-12);
  EXPECT_TRUE(structural_checks(rec).pass());
}

TEST(Structure, CircleMatricesPassAndAdversarialFail) {
  const MomentFunctional l = MomentFunctional::circle(12);
  const RecurrenceData rec = extract_recurrence(l, circle_closed_form(4).basis);
  EXPECT_TRUE(structural_checks(rec).pass());

  RecurrenceData zero_a = rec;
  for (auto& aj : zero_a.A) aj[2] = RealMatrix(aj[2].rows(), aj[2].cols(), 0.0);
  const StructuralReport sr = structural_checks(zero_a);
  EXPECT_FALSE(sr.a_injective);
  EXPECT_TRUE(sr.b_symmetric);

  RecurrenceData skew_b = rec;
  skew_b.B[1][1](0, 1) = 0.3;
  EXPECT_FALSE(structural_checks(skew_b).b_symmetric);
}

TEST(Structure, GaugeCovarianceOfOneRotation) {
  const MomentFunctional l = MomentFunctional::circle(12);
  const RigidBasis b = circle_closed_form(4).basis;
  const RecurrenceData rec = extract_recurrence(l, b);
  const double c = std::cos(0.3), s = std::sin(0.3);
  std::vector<RealMatrix> gauge{RealMatrix::identity(1)};
  for (int k = 1; k <= 4; ++k) gauge.push_back(RealMatrix{{c, -s}, {s, c}});
  const RecurrenceData rot = extract_recurrence(l, rotate_basis(b, gauge));
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 4; ++k)
      EXPECT_LE(max_abs_diff(rot.A[j][k], gauge[k] * rec.A[j][k] * gauge[k + 1].transpose()), 1e-12);
}

TEST(ResidueBasis, LemniscateBasisSpansTheQuotient) {
  const MomentFunctional l = MomentFunctional::lemniscate(16);
  const RigidBasis b = gram_schmidt(l, candidate_columns(l.ideal(), 5), 5);
  const ResidueBasis rb(b);
  EXPECT_EQ(rb.size(), 1u + 2 + 3 + 4 + 4 + 4);
  EXPECT_GT(rb.min_singular_value(), 1e-8);
  // Expanding a basis entry gives a unit vector.
  const auto c = rb.expand(b[3][2]);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c[i], i == rb.offset(3) + 2 ? 1.0 : 0.0, 1e-10);
  EXPECT_THROW(rb.expand(FloatPolynomial::term(Monomial({0, 7}), 1.0)), PreconditionError);
}

TEST(Report, BasisAndRecurrenceJsonRoundTrip) {
  const MomentFunctional l = MomentFunctional::circle(10);
  const RigidBasis b = circle_closed_form(4).basis;
  const RecurrenceData rec = extract_recurrence(l, b);
  const RigidBasis b2 = basis_from_json(basis_to_json(b));
  const RecurrenceData rec2 = recurrence_from_json(recurrence_to_json(rec));
  ASSERT_EQ(b2.columns.size(), b.columns.size());
  for (std::size_t k = 0; k < b.columns.size(); ++k)
    for (std::size_t i = 0; i < b[k].size(); ++i) EXPECT_EQ(b2[k][i], b[k][i]);
  EXPECT_EQ(b2.ideal->basis(), b.ideal->basis());
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_EQ(max_abs_diff(rec2.A[j][k], rec.A[j][k]), 0.0);
      EXPECT_EQ(max_abs_diff(rec2.B[j][k], rec.B[j][k]), 0.0);
    }
}

}  // namespace
}  // namespace cdpoly
