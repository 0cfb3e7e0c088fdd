#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cdpoly/cdkernel.hpp"
#include "cdpoly/moments.hpp"
#include "cdpoly/orthonorm.hpp"
#include "cdpoly/report.hpp"

namespace cdpoly {

struct PipelineTolerances {
  double orthonormality = kOrthonormalityTol;
  double recurrence = kRecurrenceTol;
  double cd = kCDTol;
  // Degrees above cd_absolute_through are held to max(cd, cd_relative * max|coef K_n|).
  int cd_absolute_through = kCDAbsoluteThrough;
  double cd_relative = kCDRelativeTol;
  double reproducing = kSpanTol;
  double recovery = 1e-8;
  int reproducing_degree = 4;
};

/// Largest |B_{k,j}| entry over the recurrence data.
inline double max_abs_b(const RecurrenceData& rec) {
  double worst = 0.0;
  for (const auto& bj : rec.B)
    for (const auto& b : bj) worst = std::max(worst, max_abs(b));
  return worst;
}

/// Max |p(y) - L_x(p(x) K_n(x,y))| over samples and over every entry p of Q_0..Q_n.
inline double reproducing_error(const MomentFunctional& l, const RigidBasis& basis, int n,
                                const std::vector<std::vector<double>>& samples) {
  double worst = 0.0;
  for (const auto& p : basis.entries(n)) worst = std::max(worst, reproducing_check(l, basis, n, p, samples));
  return worst;
}

/// Checks shared by every pipeline: column sizes against the quotient
/// profile, orthonormality, recurrence residuals, B symmetry and stacked-A
/// rank, CD residuals for n = 0..N, the reproducing property and the
/// converse round trip. The basis must reach degree N+1.
inline void run_standard_checks(PipelineReport& report, const MomentFunctional& l, const RigidBasis& basis,
                                const RecurrenceData& rec, int n, const PipelineTolerances& tol,
                                const std::vector<std::vector<double>>& samples) {
  const QuotientProfile prof = l.ideal().quotient_profile(basis.max_degree());
  std::vector<int> expected(prof.d_V.begin(), prof.d_V.begin() + static_cast<long>(basis.columns.size()));
  report.checks.push_back(make_flag("column sizes equal d_V", basis.dims() == expected));
  report.checks.push_back(make_check("orthonormality", orthonormality_error(l, basis), tol.orthonormality));

  const RecurrenceReport rr = verify_recurrence(l.ideal(), basis, rec, tol.recurrence);
  report.checks.push_back(make_check("recurrence residual", rr.max_residual, tol.recurrence));
  const StructuralReport sr = structural_checks(rec);
  report.checks.push_back(make_check("B symmetric", sr.max_asymmetry, kSymmetryTol));
  report.checks.push_back(make_flag("stacked A injective", sr.a_injective));

  const CDContext ctx(basis);
  const int n_cd = std::min(n, rec.degrees() - 1);
  const CDTolerance cd_tol{tol.cd, tol.cd_absolute_through, tol.cd_relative};
  CDReport cd = cd_report(ctx.doubled(), basis, rec, n_cd, cd_tol);
  if (n_cd <= tol.cd_absolute_through) {
    report.checks.push_back(make_check("cd residual", cd.max_residual, tol.cd));
  } else {
    report.checks.push_back(make_check("cd residual (n <= " + std::to_string(tol.cd_absolute_through) + ")",
                                       cd.max_residual_through(tol.cd_absolute_through), tol.cd));
    double rel = 0.0;
    for (std::size_t i = 0; i < cd.degrees.size(); ++i)
      if (cd.degrees[i] > tol.cd_absolute_through)
        for (const auto& row : cd.residuals) rel = std::max(rel, row[i] / cd.kernel_scale[i]);
    report.checks.push_back(make_check("cd residual / kernel scale (n > " + std::to_string(tol.cd_absolute_through) + ")",
                                       rel, tol.cd_relative));
  }

  if (!samples.empty()) {
    const int rd = std::min(tol.reproducing_degree, basis.max_degree());
    const double err = reproducing_error(l, basis, rd, samples);
    cd.reproducing_errors.push_back(err);
    report.checks.push_back(make_check("reproducing property", err, tol.reproducing));
  }
  report.cd = cd;

  double recovered = 0.0;
  bool structural = true;
  std::string failure;
  for (std::size_t j = 0; j < rec.nvars; ++j) {
    const std::vector<RealMatrix> a(rec.A[j].begin(), rec.A[j].begin() + n_cd + 1);
    try {
      const RecoveryResult res = recover_recurrence(ctx, a, j, tol.recovery, cd_tol);
      if (!res.ok()) {
        structural = false;
        failure = res.failures.front();
      }
      for (std::size_t k = 0; k < res.B.size(); ++k)
        recovered = std::max(recovered, max_abs_diff(res.B[k], rec.B[j][k]));
    } catch (const PreconditionError& e) {
      structural = false;
      failure = e.what();
    }
  }
  report.checks.push_back(make_flag("converse: only degree-k blocks survive", structural));
  report.checks.push_back(make_check("converse: recovered B", recovered, tol.recovery));
  if (!failure.empty()) report.notices.push_back("converse: " + failure);
}

}  // namespace cdpoly
