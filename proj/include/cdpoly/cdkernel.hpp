#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdpoly/column.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/ideal.hpp"
#include "cdpoly/moments.hpp"
#include "cdpoly/orthonorm.hpp"

namespace cdpoly {

inline constexpr double kCDTol = 1e-8;
/// Pipeline default: absolute CD bound through this degree, relative to the
/// kernel's coefficient scale above it.
inline constexpr int kCDAbsoluteThrough = 4;
inline constexpr double kCDRelativeTol = 1e-13;
inline constexpr double kSpanTol = 1e-9;

// K_n(x, y) = sum_{k <= n} Q_k(x)^T Q_k(y), a polynomial in 2d variables
// with x in slots 0..d-1 and y in slots d..2d-1.
struct CDKernel {
  int n = 0;
  FloatPolynomial kernel;
};

inline CDKernel build_kernel(const RigidBasis& basis, int n) {
  if (n < 0 || n > basis.max_degree()) throw PreconditionError("build_kernel: degree outside the basis");
  const ScopedZeroTolerance working(kWorkingZeroTol);
  CDKernel k{n, FloatPolynomial(2 * basis.nvars())};
  for (int m = 0; m <= n; ++m) {
    const auto& q = basis[static_cast<std::size_t>(m)];
    k.kernel += tensor_dot(q, q);
  }
  return k;
}

namespace detail {

inline bool is_terminal(const RigidBasis& basis, int n) {
  return basis.terminal_degree.has_value() && n == *basis.terminal_degree;
}

}  // namespace detail

// (x_j - y_j) K_n - [A Q_{n+1}(x)]^T Q_n(y) + Q_n(x)^T [A Q_{n+1}(y)], before
// reduction, in exact arithmetic on the binary values of the float data so
// that the residual measures the data rather than the arithmetic.
// Q_{n+1} = 0 at a terminal degree.
inline RationalPolynomial cd_defect(const RigidBasis& basis, const RealMatrix& a, int n, std::size_t j) {
  const std::size_t d = basis.nvars();
  if (j >= d) throw DimensionError("variable index out of range");
  if (n < 0 || n > basis.max_degree()) throw PreconditionError("cd_residual: degree outside the basis");
  const RationalPolynomial xj = RationalPolynomial::variable(2 * d, j);
  const RationalPolynomial yj = RationalPolynomial::variable(2 * d, d + j);
  RationalPolynomial kernel(2 * d);
  for (int m = 0; m <= n; ++m) {
    const RationalColumn q = to_rational(basis[static_cast<std::size_t>(m)]);
    kernel += tensor_dot(q, q);
  }
  RationalPolynomial r = (xj - yj) * kernel;
  if (!detail::is_terminal(basis, n)) {
    if (n + 1 > basis.max_degree()) throw PreconditionError("cd_residual needs Q_{n+1}");
    const RationalColumn qn = to_rational(basis[static_cast<std::size_t>(n)]);
    const RationalColumn aq = column_matmul(to_rational(a), to_rational(basis[static_cast<std::size_t>(n) + 1]));
    r -= tensor_dot(aq, qn);
    r += tensor_dot(qn, aq);
  }
  return r;
}

/// Max coefficient of NF_{V2} of the CD defect with the supplied A_{n,j}.
inline double cd_residual(const Ideal& v2, const RigidBasis& basis, const RealMatrix& a, int n, std::size_t j) {
  return to_float(v2.normal_form(cd_defect(basis, a, n, j))).max_abs_coefficient();
}

inline double cd_residual(const Ideal& v2, const RigidBasis& basis, const RecurrenceData& rec, int n,
                          std::size_t j) {
  if (n >= rec.degrees()) throw PreconditionError("recurrence data does not reach degree " + std::to_string(n));
  return cd_residual(v2, basis, rec.A.at(j)[static_cast<std::size_t>(n)], n, j);
}

/// Per-degree CD thresholds: `absolute` through degree `absolute_through`,
/// above it max(absolute, relative * max|coef K_n|). The relative part keeps
/// the bound meaningful when the kernel coefficients grow with n.
struct CDTolerance {
  double absolute = kCDTol;
  int absolute_through = std::numeric_limits<int>::max();
  double relative = 0.0;

  double at(int n, double kernel_scale) const {
    if (n <= absolute_through) return absolute;
    return std::max(absolute, relative * kernel_scale);
  }
};

struct CDReport {
  std::vector<int> degrees;
  std::vector<std::vector<double>> residuals;  // [j][index into degrees]
  std::vector<double> thresholds;              // per degree
  std::vector<double> kernel_scale;            // max |coef| of K_n, per degree
  std::vector<double> reproducing_errors;
  double threshold = kCDTol;
  double max_residual = 0.0;
  bool pass = false;

  /// (n, j) pairs, j 1-based, whose residual exceeds its threshold.
  std::vector<std::pair<int, int>> failures() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t j = 0; j < residuals.size(); ++j)
      for (std::size_t i = 0; i < degrees.size(); ++i) {
        const double t = i < thresholds.size() ? thresholds[i] : threshold;
        if (!(residuals[j][i] <= t)) out.emplace_back(degrees[i], static_cast<int>(j) + 1);
      }
    return out;
  }

  /// Largest residual over degrees n <= n_max.
  double max_residual_through(int n_max) const {
    double worst = 0.0;
    for (const auto& row : residuals)
      for (std::size_t i = 0; i < degrees.size(); ++i)
        if (degrees[i] <= n_max) worst = std::max(worst, row[i]);
    return worst;
  }
};

inline CDReport cd_report(const Ideal& v2, const RigidBasis& basis, const RecurrenceData& rec, int n_max,
                          const CDTolerance& tol) {
  CDReport rep;
  rep.threshold = tol.absolute;
  for (int n = 0; n <= n_max; ++n) {
    rep.degrees.push_back(n);
    const double scale = build_kernel(basis, n).kernel.max_abs_coefficient();
    rep.kernel_scale.push_back(scale);
    rep.thresholds.push_back(tol.at(n, scale));
  }
  for (std::size_t j = 0; j < rec.nvars; ++j) {
    std::vector<double> row;
    for (int n : rep.degrees) {
      const double r = cd_residual(v2, basis, rec, n, j);
      rep.max_residual = std::max(rep.max_residual, r);
      row.push_back(r);
    }
    rep.residuals.push_back(std::move(row));
  }
  rep.pass = rep.failures().empty();
  return rep;
}

inline CDReport cd_report(const Ideal& v2, const RigidBasis& basis, const RecurrenceData& rec, int n_max,
                          double threshold = kCDTol) {
  return cd_report(v2, basis, rec, n_max, CDTolerance{threshold});
}

/// Orthogonal projection of p onto span{Q_0..Q_n}; `residual` is the
/// largest coefficient of what is left over modulo V, relative to the
/// largest coefficient of NF(p) (or absolute when that is below 1).
struct Projection {
  FloatPolynomial projected;
  double residual = 0.0;
};

inline Projection project_onto_basis(const MomentFunctional& l, const RigidBasis& basis, int n,
                                     const FloatPolynomial& p) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  Projection out{FloatPolynomial(p.nvars()), 0.0};
  for (const auto& e : basis.entries(n)) out.projected += e.scaled(l(p * e));
  const double scale = std::max(1.0, l.ideal().normal_form(p).max_abs_coefficient());
  out.residual = l.ideal().normal_form(p - out.projected).max_abs_coefficient() / scale;
  return out;
}

/// max over samples y of |p(y) - L_x(p(x) K_n(x, y))|.
inline double reproducing_check(const MomentFunctional& l, const RigidBasis& basis, int n,
                                const FloatPolynomial& p, const std::vector<std::vector<double>>& samples) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const Projection proj = project_onto_basis(l, basis, n, p);
  if (proj.residual > kSpanTol) {
    throw PreconditionError("polynomial is not in the span of Q_0..Q_" + std::to_string(n) +
                            " (projection residual " + sci(proj.residual) + ")");
  }
  const CDKernel k = build_kernel(basis, n);
  double worst = 0.0;
  for (const auto& y : samples) {
    const FloatPolynomial ky = substitute_slot(k.kernel, Slot::y, std::span<const double>(y));
    worst = std::max(worst, std::abs(p.evaluate(y) - l(p * ky)));
  }
  return worst;
}

/// Shared state for residue-basis computations on one rigid basis: the
/// doubled ideal and the factored coordinate matrix are built once.
class CDContext {
 public:
  explicit CDContext(RigidBasis basis)
      : basis_(std::move(basis)), v2_(double_ideal(*basis_.ideal)), residue_(basis_) {}

  const RigidBasis& basis() const { return basis_; }
  const Ideal& ideal() const { return *basis_.ideal; }
  const Ideal& doubled() const { return v2_; }
  const ResidueBasis& residue() const { return residue_; }

 private:
  RigidBasis basis_;
  Ideal v2_;
  ResidueBasis residue_;
};

/// The unique E with P1 == E Q_j and P2 == E^T Q_k modulo V, given
/// P1(x)^T Q_k(y) == Q_j(x)^T P2(y) modulo V2.
inline RealMatrix match_tensor_coefficients(const CDContext& ctx, const FloatColumn& p1, const FloatColumn& p2,
                                            int k, int j, double tol = kCDTol) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const RigidBasis& basis = ctx.basis();
  const auto& qk = basis[static_cast<std::size_t>(k)];
  const auto& qj = basis[static_cast<std::size_t>(j)];
  if (p1.size() != qk.size() || p2.size() != qj.size()) {
    throw DimensionError("match_tensor_coefficients: P1 must match Q_k and P2 must match Q_j in size");
  }
  const double hyp = ctx.doubled().normal_form(tensor_dot(p1, qk) - tensor_dot(qj, p2)).max_abs_coefficient();
  if (hyp > tol) {
    throw PreconditionError("not a pure tensor relation (defect " + sci(hyp) + ")");
  }
  const RealMatrix expansion = ctx.residue().expand(p1);
  const double stray = ctx.residue().off_block_max(expansion, j);
  RealMatrix e = ctx.residue().block(expansion, j);
  const double back = max_abs_coefficient(ctx.ideal().normal_form(p2 - column_matmul(e.transpose(), qk)));
  if (stray > tol || back > tol) {
    throw PreconditionError("not a pure tensor relation (stray " + sci(stray) + ", transpose defect " +
                            sci(back) + ")");
  }
  return e;
}

struct RecoveryResult {
  std::size_t j = 0;
  std::vector<RealMatrix> B;
  std::vector<double> off_block;     // per k, largest coefficient outside the Q_k block
  std::vector<double> cd_residuals;  // per n, with the supplied A
  double tolerance = kCDTol;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Converse direction: from A_{n,j} (n = 0..N) satisfying the CD identity,
/// rebuild B_{k,j} from D_k = A_k Q_{k+1} + A_{k-1}^T Q_{k-1} - X_j Q_k.
/// `tol` bounds the coefficients outside the Q_k block; the CD precondition
/// is checked against `cd_tol`.
inline RecoveryResult recover_recurrence(const CDContext& ctx, const std::vector<RealMatrix>& a, std::size_t j,
                                         double tol, const CDTolerance& cd_tol) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const RigidBasis& basis = ctx.basis();
  if (a.empty()) throw PreconditionError("recover_recurrence needs at least A_0");
  const int n_max = static_cast<int>(a.size()) - 1;
  RecoveryResult out;
  out.j = j;
  out.tolerance = tol;
  for (int n = 0; n <= n_max; ++n) {
    const double r = cd_residual(ctx.doubled(), basis, a[static_cast<std::size_t>(n)], n, j);
    out.cd_residuals.push_back(r);
    const double limit =
        n <= cd_tol.absolute_through ? cd_tol.absolute
                                     : cd_tol.at(n, build_kernel(basis, n).kernel.max_abs_coefficient());
    if (!(r <= limit)) {
      throw PreconditionError("CD identity fails at n=" + std::to_string(n) + ", j=" + std::to_string(j + 1) +
                              " (residual " + sci(r) + ")");
    }
  }
  const FloatPolynomial xj = FloatPolynomial::variable(basis.nvars(), j);
  for (int k = 0; k <= n_max; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    FloatColumn dk = FloatPolynomial::constant(basis.nvars(), -1.0) * (xj * basis[ku]);
    if (!detail::is_terminal(basis, k)) dk = dk + column_matmul(a[ku], basis[ku + 1]);
    if (k > 0) dk = dk + column_matmul(a[ku - 1].transpose(), basis[ku - 1]);
    const RealMatrix expansion = ctx.residue().expand(ctx.ideal().normal_form(dk));
    const double stray = ctx.residue().off_block_max(expansion, k);
    out.off_block.push_back(stray);
    if (stray > tol) {
      out.failures.push_back("k=" + std::to_string(k) + ": coefficients outside the Q_k block up to " +
                             sci(stray));
    }
    out.B.push_back(scaled(ctx.residue().block(expansion, k), -1.0));
  }
  return out;
}

inline RecoveryResult recover_recurrence(const CDContext& ctx, const std::vector<RealMatrix>& a, std::size_t j,
                                         double tol = kCDTol) {
  return recover_recurrence(ctx, a, j, tol, CDTolerance{tol});
}

}  // namespace cdpoly
