#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cdpoly/curves.hpp"
#include "cdpoly/examples/common.hpp"
#include "cdpoly/examples/ops1d.hpp"

namespace cdpoly {

inline constexpr int kLemniscateMaxDegree = 8;

/// W^{j,k}_l = x1^j x2^k q^{j,k}_l(x1^2 + x2^2), j, k in {0, 1}.
struct WLabel {
  int j = 0;
  int k = 0;
  int l = 0;
};

struct LemniscateAssembly {
  std::array<std::array<OrthoFamily1D, 2>, 2> families;  // [j][k]
  std::vector<std::vector<WLabel>> labels;              // per column, per entry
  RigidBasis basis;
};

/// Labels of column n: Q_0 = [W00_0], Q_1 = [W10_0; W01_0],
/// Q_{2s-1} = [W10_{2s-3}; W10_{2s-2}; W01_{2s-3}; W01_{2s-2}],
/// Q_{2s} = [W00_{2s-1}; W00_{2s}; W11_{2s-3}; W11_{2s-2}] (negative indices dropped).
inline std::vector<WLabel> lemniscate_column_labels(int n) {
  if (n == 0) return {{0, 0, 0}};
  std::vector<WLabel> raw;
  if (n % 2 == 1) {
    const int s = (n + 1) / 2;
    raw = {{1, 0, 2 * s - 3}, {1, 0, 2 * s - 2}, {0, 1, 2 * s - 3}, {0, 1, 2 * s - 2}};
  } else {
    const int s = n / 2;
    raw = {{0, 0, 2 * s - 1}, {0, 0, 2 * s}, {1, 1, 2 * s - 3}, {1, 1, 2 * s - 2}};
  }
  std::vector<WLabel> out;
  for (const auto& w : raw)
    if (w.l >= 0) out.push_back(w);
  return out;
}

/// Whether L(x_j W^{mu1,nu1} W^{mu2,nu2}) may be nonzero: for j = 1 it needs
/// mu1 + mu2 = 1 and nu1 = nu2; for j = 2, mu1 = mu2 and nu1 + nu2 = 1.
inline bool selection_allows(std::size_t j, const WLabel& a, const WLabel& b) {
  if (j == 0) return a.j + b.j == 1 && a.k == b.k;
  return a.j == b.j && a.k + b.k == 1;
}

/// Degree budget of a lemniscate functional whose base moments carry the
/// one-variable families through degree l_max.
inline int lemniscate_budget_for(int l_max) { return 2 * l_max + 6; }

/// Families q^{j,k}_l for l <= top and the columns Q_0..Q_top. Each entry is
/// formed exactly as x1^j x2^k pi_l(s) reduced modulo the curve, then scaled
/// by 1/sqrt(h_l).
inline LemniscateAssembly assemble_lemniscate(const Moments1D& base, int top) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  LemniscateAssembly as;
  as.basis.ideal = std::make_shared<const Ideal>(lemniscate_ideal());
  as.basis.source = RigidBasis::Source::ClosedForm;
  const Ideal& v = *as.basis.ideal;
  const int l_max = std::max(top, 0);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const auto w = lemniscate_weighted_binary(base, j, k, static_cast<std::size_t>(2 * l_max + 1));
      as.families[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = ops1d(w, l_max, false);
    }
  const RationalPolynomial s = parse_polynomial<Rational>("x1^2 + x2^2", 2);
  auto reduce = [&](const RationalPolynomial& p) { return v.normal_form(p); };
  for (int n = 0; n <= top; ++n) {
    std::vector<FloatPolynomial> entries;
    const auto labels = lemniscate_column_labels(n);
    for (const auto& w : labels) {
      const auto& fam = as.families[static_cast<std::size_t>(w.j)][static_cast<std::size_t>(w.k)];
      const auto& pi = fam.monic[static_cast<std::size_t>(w.l)];
      std::vector<Rational> coeffs(static_cast<std::size_t>(pi.degree() + 1), Rational(0));
      for (const auto& [m, c] : pi.terms()) coeffs[static_cast<std::size_t>(m[0])] = c;
      RationalPolynomial q = compose_univariate<Rational>(coeffs, s, reduce);
      q = v.normal_form(RationalPolynomial::term(Monomial(std::vector<int>{w.j, w.k}), Rational(1)) * q);
      const double scale = 1.0 / std::sqrt(fam.norms[static_cast<std::size_t>(w.l)].get_d());
      entries.push_back(to_float(q).scaled(scale));
    }
    as.labels.push_back(labels);
    as.basis.columns.emplace_back(std::move(entries));
  }
  return as;
}

/// Largest |L(x_j e_a e_b)| over entry pairs the selection rules force to vanish.
inline double selection_rule_defect(const MomentFunctional& l, const LemniscateAssembly& as) {
  std::vector<FloatPolynomial> entries;
  std::vector<WLabel> labels;
  for (std::size_t c = 0; c < as.basis.columns.size(); ++c)
    for (std::size_t i = 0; i < as.basis[c].size(); ++i) {
      entries.push_back(as.basis[c][i]);
      labels.push_back(as.labels[c][i]);
    }
  double worst = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const FloatPolynomial xj = FloatPolynomial::variable(2, j);
    for (std::size_t a = 0; a < entries.size(); ++a) {
      const FloatPolynomial xa = xj * entries[a];
      for (std::size_t b = a; b < entries.size(); ++b)
        if (!selection_allows(j, labels[a], labels[b])) worst = std::max(worst, std::abs(l(xa * entries[b])));
    }
  }
  return worst;
}

/// Largest A_{k,j} entry in a block the selection rules force to vanish
/// (block-diagonal for j = 1, block-anti-diagonal for j = 2).
inline double a_block_defect(const LemniscateAssembly& as, const RecurrenceData& rec) {
  double worst = 0.0;
  for (std::size_t j = 0; j < rec.nvars; ++j)
    for (int k = 0; k < rec.degrees(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const RealMatrix& a = rec.A[j][ku];
      for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
          if (!selection_allows(j, as.labels[ku][r], as.labels[ku + 1][c])) worst = std::max(worst, std::abs(a(r, c)));
    }
  return worst;
}

/// Every entry of Q_n has degree exactly n after reduction.
inline bool lemniscate_degrees_exact(const LemniscateAssembly& as) {
  for (std::size_t n = 0; n < as.basis.columns.size(); ++n)
    for (const auto& e : as.basis[n])
      if (as.basis.ideal->normal_form(e).degree() != static_cast<int>(n)) return false;
  return true;
}

/// Sigma_n = [x1^n; x1^{n-1} x2; x1^{n-2} x2^2; x1^{n-3} x2^3], truncated for n < 3.
inline std::vector<Monomial> sigma_column(int n) {
  std::vector<Monomial> out;
  for (int b = 0; b <= std::min(n, 3); ++b) out.emplace_back(std::vector<int>{n - b, b});
  return out;
}

struct MonomialRigidReport {
  std::size_t rank = 0;
  std::size_t dimension = 0;    // quotient dimension through degree N
  bool all_representable = false;
  bool x2_fourth_identity = false;

  bool pass() const { return rank == dimension && all_representable && x2_fourth_identity; }
};

namespace detail {

/// Exact standard-monomial coordinates of NF(p), indexed by `index`.
inline std::vector<Rational> exact_coordinates(const Ideal& v, const RationalPolynomial& p,
                                               const std::map<Monomial, std::size_t, GrevlexDescending>& index) {
  std::vector<Rational> out(index.size(), Rational(0));
  const RationalPolynomial r = v.normal_form(p);
  for (const auto& [m, c] : r.terms()) out.at(index.at(m)) = c;
  return out;
}

inline std::map<Monomial, std::size_t, GrevlexDescending> standard_index(const Ideal& v, int n) {
  std::map<Monomial, std::size_t, GrevlexDescending> index;
  for (int k = 0; k <= n; ++k)
    for (const auto& m : v.standard_monomials(k)) index.emplace(m, index.size());
  return index;
}

inline Matrix<Rational> sigma_matrix(const Ideal& v, int n,
                                     const std::map<Monomial, std::size_t, GrevlexDescending>& index) {
  std::vector<std::vector<Rational>> cols;
  for (int k = 0; k <= n; ++k)
    for (const auto& m : sigma_column(k)) cols.push_back(exact_coordinates(v, RationalPolynomial::term(m, 1), index));
  Matrix<Rational> a(index.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < index.size(); ++r) a(r, c) = cols[c][r];
  return a;
}

}  // namespace detail

/// Whether the residue of `m` lies in the span of the residues of Sigma_0..Sigma_N.
inline bool sigma_representable(const Monomial& m, int n) {
  const Ideal v = lemniscate_ideal();
  const auto index = detail::standard_index(v, std::max(n, m.degree()));
  const Matrix<Rational> a = detail::sigma_matrix(v, n, index);
  Matrix<Rational> aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
  }
  const auto v_m = detail::exact_coordinates(v, RationalPolynomial::term(m, 1), index);
  for (std::size_t r = 0; r < a.rows(); ++r) aug(r, a.cols()) = v_m[r];
  return exact_rank(aug) == exact_rank(a);
}

/// The monomial columns Sigma_n span the quotient through degree N, and
/// x2^4 == x1^2 - x2^2 - x1^4 - 2 x1^2 x2^2 modulo the curve.
inline MonomialRigidReport monomial_rigid_check(int n) {
  const Ideal v = lemniscate_ideal();
  const auto index = detail::standard_index(v, n);
  const Matrix<Rational> a = detail::sigma_matrix(v, n, index);
  MonomialRigidReport rep;
  rep.dimension = index.size();
  rep.rank = exact_rank(a);
  rep.all_representable = true;
  for (int k = 0; k <= n && rep.all_representable; ++k)
    for (const auto& m : monomials_of_degree(2, k))
      if (!sigma_representable(m, n)) rep.all_representable = false;
  rep.x2_fourth_identity = em_v(parse_polynomial<Rational>("x2^4", 2),
                                parse_polynomial<Rational>("x1^2 - x2^2 - x1^4 - 2*x1^2*x2^2", 2), v);
  return rep;
}

/// Points phi(t) = (cos t, sin t cos t) / (1 + sin^2 t) on the lemniscate.
inline std::vector<std::vector<double>> lemniscate_samples(int count = 8) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < count; ++i) {
    const double t = 0.2 + 2.0 * std::numbers::pi * i / count;
    const double den = 1.0 + std::sin(t) * std::sin(t);
    out.push_back({std::cos(t) / den, std::sin(t) * std::cos(t) / den});
  }
  return out;
}

/// Rounding level of a CD residual at degree n: a small multiple of machine
/// epsilon times max|coef K_n|.
inline double cd_rounding_level(double kernel_scale) {
  return 100.0 * std::numeric_limits<double>::epsilon() * kernel_scale;
}

struct LemniscateOptions {
  int max_degree = 6;
  int quad_points = kDefaultQuadPoints;
  bool convergence = true;  // rerun CD residuals at twice the node count
  PipelineTolerances tol{};
};

/// Per degree, the residual at the finer rule is at most the coarse one or
/// at rounding level. Returns the largest excess ratio (<= 1 passes).
inline double convergence_excess(const CDReport& coarse, const CDReport& fine) {
  double worst = 0.0;
  for (std::size_t j = 0; j < fine.residuals.size(); ++j)
    for (std::size_t i = 0; i < fine.degrees.size(); ++i) {
      const double allowed = std::max(coarse.residuals[j][i], cd_rounding_level(fine.kernel_scale[i]));
      worst = std::max(worst, allowed > 0.0 ? fine.residuals[j][i] / allowed : (fine.residuals[j][i] > 0.0 ? INFINITY : 0.0));
    }
  return worst;
}

struct LemniscateRun {
  LemniscateAssembly assembly;
  RecurrenceData rec;
  MomentFunctional functional;
  CDReport cd;
};

/// Assembly through degree N+1 and CD residuals for n = 0..N at one node count.
inline LemniscateRun lemniscate_run(int n, int quad_points, const CDTolerance& cd_tol) {
  MomentFunctional l = MomentFunctional::lemniscate(lemniscate_budget_for(n + 1), quad_points);
  LemniscateAssembly as = assemble_lemniscate(*l.base_moments(), n + 1);
  RecurrenceData rec = extract_recurrence(l, as.basis);
  const Ideal v2 = double_ideal(*as.basis.ideal);
  CDReport cd = cd_report(v2, as.basis, rec, n, cd_tol);
  return LemniscateRun{std::move(as), std::move(rec), std::move(l), std::move(cd)};
}

inline PipelineReport lemniscate_pipeline(const LemniscateOptions& opt) {
  const int n = opt.max_degree;
  if (n < 0 || n > kLemniscateMaxDegree) throw PreconditionError("lemniscate pipeline supports 0 <= N <= 8");
  PipelineReport rep;
  rep.pipeline = "lemniscate";
  rep.config = {{"max_degree", n}, {"quad_points", opt.quad_points}};
  const CDTolerance cd_tol{opt.tol.cd, opt.tol.cd_absolute_through, opt.tol.cd_relative};
  const LemniscateRun run = lemniscate_run(n, opt.quad_points, cd_tol);
  const LemniscateAssembly& as = run.assembly;
  const MomentFunctional& l = run.functional;

  rep.checks.push_back(make_flag("entries of Q_n have degree n", lemniscate_degrees_exact(as)));
  const ResidueBasis residue(as.basis);
  rep.checks.push_back(make_check("rigid basis: residue matrix conditioning",
                                  residue.min_singular_value() > 0.0
                                      ? residue.max_singular_value() / residue.min_singular_value()
                                      : INFINITY,
                                  1e12));
  rep.checks.push_back(make_check("B = 0", max_abs_b(run.rec), 1e-8));
  rep.checks.push_back(make_check("selection rules (cross terms)", selection_rule_defect(l, as), 1e-9));
  rep.checks.push_back(make_check("A zero blocks", a_block_defect(as, run.rec), 1e-8));

  const MonomialRigidReport mono = monomial_rigid_check(n);
  rep.checks.push_back(make_flag("monomial columns span the quotient", mono.rank == mono.dimension && mono.all_representable));
  rep.checks.push_back(make_flag("x2^4 identity modulo V", mono.x2_fourth_identity));

  run_standard_checks(rep, l, as.basis, run.rec, n, opt.tol, lemniscate_samples());

  if (opt.convergence && 2 * opt.quad_points <= 1024) {
    const LemniscateRun fine = lemniscate_run(n, 2 * opt.quad_points, cd_tol);
    rep.extra["convergence"] = {{"quad_points", {opt.quad_points, 2 * opt.quad_points}},
                                {"cd_coarse", to_json(run.cd)},
                                {"cd_fine", to_json(fine.cd)}};
    rep.checks.push_back(make_check("cd residual at doubled nodes: decrease or rounding level",
                                    convergence_excess(run.cd, fine.cd), 1.0));
  }
  rep.basis = as.basis;
  rep.recurrence = run.rec;
  return rep;
}

}  // namespace cdpoly
