#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cdpoly/examples/common.hpp"
#include "cdpoly/examples/ops1d.hpp"

namespace cdpoly {

inline constexpr int kFavardMaxDegree = 16;
/// Monomial coefficients of the [0, 1] family grow about sixfold per degree,
/// so its float checks stop here; its exact checks run at every degree.
inline constexpr int kUniformFloatMaxDegree = 8;

/// One-variable family viewed as a rigid basis for V = {0}, d = 1:
/// Q_k = [p_k].
inline RigidBasis univariate_basis(const OrthoFamily1D& fam) {
  RigidBasis basis;
  basis.ideal = std::make_shared<const Ideal>(Ideal::zero(1));
  basis.source = RigidBasis::Source::ClosedForm;
  for (const auto& p : fam.p) basis.columns.push_back(FloatColumn({p}));
  return basis;
}

/// Exact orthonormality of the monic family: L(pi_k pi_l) = delta_kl h_k.
/// Returns the number of violated identities.
inline int exact_orthogonality_failures(const OrthoFamily1D& fam, const Moments1D& moments) {
  if (!moments.has_exact()) throw PreconditionError("exact orthogonality needs exact moments");
  int failures = 0;
  for (std::size_t k = 0; k < fam.monic.size(); ++k)
    for (std::size_t l = 0; l <= k; ++l) {
      const Rational v = detail::apply_moments(moments.exact, fam.monic[k] * fam.monic[l]);
      if (v != (k == l ? fam.norms[k] : Rational(0))) ++failures;
    }
  return failures;
}

struct FavardMomentSet {
  std::string name;
  Moments1D moments;
  bool symmetric = false;
  std::vector<double> samples;
  int float_max_degree = kFavardMaxDegree;
};

/// Legendre (symmetric on [-1, 1]) and uniform on [0, 1], both normalized.
inline std::vector<FavardMomentSet> favard_moment_sets(int n) {
  const auto len = static_cast<std::size_t>(2 * n + 4);
  return {
      {"legendre", legendre_moments(len), true, {-0.9, -0.55, -0.2, 0.05, 0.3, 0.6, 0.85, 0.97}},
      {"uniform01", uniform01_moments(len), false, {0.02, 0.15, 0.3, 0.45, 0.5, 0.66, 0.8, 0.99},
       kUniformFloatMaxDegree},
  };
}

struct FavardOptions {
  int max_degree = 8;
  PipelineTolerances tol{};
};

/// For each moment set: ops1d through degree N+1, the recurrence
/// x p_k = a_k p_{k+1} + b_k p_k + a_{k-1} p_{k-1}, the exact classical CD
/// identity without reduction, and the multivariable machinery with V = {0}.
inline PipelineReport favard1d_pipeline(const FavardOptions& opt) {
  const int n = opt.max_degree;
  if (n < 0 || n > kFavardMaxDegree) throw PreconditionError("favard1d pipeline supports 0 <= N <= 16");
  const ScopedZeroTolerance working(kWorkingZeroTol);
  PipelineReport rep;
  rep.pipeline = "favard1d";
  rep.config = {{"max_degree", n}};
  for (const auto& set : favard_moment_sets(n)) {
    const std::string tag = set.name + ": ";
    const OrthoFamily1D fam = ops1d(set.moments, n + 1);
    const MomentFunctional l = MomentFunctional::univariate(set.moments);

    rep.checks.push_back(make_check(tag + "exact orthogonality of monic family",
                                    exact_orthogonality_failures(fam, set.moments), 0.0));
    bool positive = true;
    for (double a : fam.a) positive = positive && a > 0.0;
    rep.checks.push_back(make_flag(tag + "a_k > 0", positive));
    rep.checks.push_back(make_check(tag + "monic recurrence defect (exact)", monic_recurrence_defect(fam).get_d(), 0.0));
    const int nf = std::min(n, set.float_max_degree);
    if (nf < n) {
      rep.notices.push_back(tag + "float checks limited to degree " + std::to_string(nf) +
                            " (monomial conditioning); exact checks cover degree " + std::to_string(n));
    }
    const OrthoFamily1D ffam = nf < n ? ops1d(set.moments, nf + 1) : fam;
    rep.checks.push_back(make_check(tag + "orthonormal recurrence residual (relative)",
                                    float_recurrence_defect(ffam), 1e-10));
    if (set.symmetric) {
      bool zero = true;
      for (const auto& b : fam.b_exact) zero = zero && sgn(b) == 0;
      rep.checks.push_back(make_flag(tag + "symmetric moments give b_k = 0 exactly", zero));
    }
    int cd_nonzero = 0;
    for (int m = 0; m <= n; ++m)
      if (!classical_cd_defect(fam, m).is_zero()) ++cd_nonzero;
    rep.checks.push_back(make_check(tag + "classical CD identity (exact, no reduction)", cd_nonzero, 0.0));

    // Full machinery with V = {0}, d = 1.
    const RigidBasis basis = univariate_basis(ffam);
    const RecurrenceData rec = extract_recurrence(l, basis);
    double coeff_dev = 0.0;
    for (int k = 0; k <= nf; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      coeff_dev = std::max(coeff_dev, std::abs(rec.A[0][ku](0, 0) - ffam.a[ku]));
      coeff_dev = std::max(coeff_dev, std::abs(rec.B[0][ku](0, 0) - ffam.b[ku]));
    }
    rep.checks.push_back(make_check(tag + "A, B equal (a_k, b_k)", coeff_dev, 1e-12));

    const RigidBasis computed = gram_schmidt(l, candidate_columns(l.ideal(), nf + 1), nf + 1);
    double gs_dev = 0.0;
    for (std::size_t k = 0; k < computed.columns.size(); ++k)
      gs_dev = std::max(gs_dev, (computed[k][0] - basis[k][0]).max_abs_coefficient());
    rep.checks.push_back(make_check(tag + "Gram-Schmidt basis equals ops1d family", gs_dev, 1e-9));

    PipelineReport sub;
    std::vector<std::vector<double>> samples;
    for (double s : set.samples) samples.push_back({s});
    run_standard_checks(sub, l, basis, rec, nf, opt.tol, samples);
    for (auto& c : sub.checks) {
      c.name = tag + c.name;
      rep.checks.push_back(std::move(c));
    }
    for (auto& s : sub.notices) rep.notices.push_back(tag + s);
    rep.extra[set.name] = {{"a", fam.a}, {"b", fam.b}, {"cd", to_json(*sub.cd)}};
    if (set.symmetric) {
      rep.basis = basis;
      rep.recurrence = rec;
      rep.cd = sub.cd;
    }
  }
  return rep;
}

}  // namespace cdpoly
