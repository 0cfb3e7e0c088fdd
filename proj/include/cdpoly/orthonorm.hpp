#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdpoly/column.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/ideal.hpp"
#include "cdpoly/linalg.hpp"
#include "cdpoly/moments.hpp"

namespace cdpoly {

inline constexpr double kOrthonormalityTol = 1e-9;
inline constexpr double kRecurrenceTol = 1e-8;
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kRankFloor = 1e-8;

/// Graded system of columns Q_0..Q_N whose residues form a basis of the
/// quotient through degree N.
struct RigidBasis {
  enum class Source { ClosedForm, Computed };

  std::shared_ptr<const Ideal> ideal;
  std::vector<FloatColumn> columns;
  Source source = Source::Computed;
  /// Set when the quotient is finite-dimensional and columns end at kappa_V.
  std::optional<int> terminal_degree;

  int max_degree() const { return static_cast<int>(columns.size()) - 1; }
  const FloatColumn& operator[](std::size_t k) const { return columns.at(k); }
  std::size_t nvars() const { return columns.front().nvars(); }

  std::vector<int> dims() const {
    std::vector<int> d;
    for (const auto& c : columns) d.push_back(static_cast<int>(c.size()));
    return d;
  }

  /// All entries of Q_0..Q_n in order.
  std::vector<FloatPolynomial> entries(int n) const {
    std::vector<FloatPolynomial> out;
    for (int k = 0; k <= n; ++k)
      for (const auto& e : columns.at(static_cast<std::size_t>(k))) out.push_back(e);
    return out;
  }
};

struct CandidateColumns {
  std::vector<FloatColumn> columns;
  std::optional<int> kappa;  // finite kappa_V when it was reached
  bool truncated = false;
  std::string notice;
};

/// Column k lists the degree-k standard monomials (descending).
inline CandidateColumns candidate_columns(const Ideal& v, int n) {
  const QuotientProfile prof = v.quotient_profile(n + 1);
  CandidateColumns out;
  for (int k = 0; k <= n; ++k) {
    const auto& mons = prof.standard[static_cast<std::size_t>(k)];
    if (mons.empty()) {
      out.truncated = true;
      out.notice = "quotient is finite-dimensional: kappa_V = " + std::to_string(k - 1) +
                   " < requested degree " + std::to_string(n);
      break;
    }
    std::vector<FloatPolynomial> col;
    for (const auto& m : mons) col.push_back(FloatPolynomial::term(m, 1.0));
    out.columns.emplace_back(std::move(col));
  }
  const int last = static_cast<int>(out.columns.size()) - 1;
  if (prof.d_V[static_cast<std::size_t>(last + 1)] == 0) out.kappa = last;
  return out;
}

/// Orthonormality defect max_{k,l} |L(Q_k Q_l^T) - delta_kl I|.
inline double orthonormality_error(const MomentFunctional& l, const RigidBasis& basis) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  double worst = 0.0;
  for (std::size_t k = 0; k < basis.columns.size(); ++k) {
    for (std::size_t m = 0; m <= k; ++m) {
      RealMatrix g = l.gram(basis.columns[k], basis.columns[m]);
      if (k == m) g = g - RealMatrix::identity(g.rows());
      worst = std::max(worst, max_abs(g));
    }
  }
  return worst;
}

/// Column Gram-Schmidt against L followed by symmetric whitening
/// U = G^{-1/2}, G = L(Qhat Qhat^T). Columns are kept reduced modulo V.
inline RigidBasis gram_schmidt(const MomentFunctional& l, const CandidateColumns& candidates, int n) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const Ideal& v = l.ideal();
  if (n + 1 > static_cast<int>(candidates.columns.size())) {
    throw PreconditionError("gram_schmidt: fewer candidate columns than requested degree");
  }
  RigidBasis basis;
  basis.ideal = l.ideal_ptr();
  basis.source = RigidBasis::Source::Computed;
  for (int k = 0; k <= n; ++k) {
    FloatColumn qhat = candidates.columns[static_cast<std::size_t>(k)];
    // Second pass re-orthogonalizes against rounding left by the first.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const FloatColumn& qj = basis.columns[static_cast<std::size_t>(j)];
        qhat = qhat - column_matmul(l.gram(qhat, qj), qj);
      }
      qhat = v.normal_form(qhat);
    }
    const RealMatrix g = symmetrized(l.gram(qhat, qhat));
    const SymmetricEigen eig = symmetric_eigen(g);
    const double lo = eig.values.front(), hi = eig.values.back();
    if (!(hi > 0.0) || lo < 1e-12 * hi) {
      throw DegeneracyError("Gram matrix L(Qhat Qhat^T) is numerically singular", k);
    }
    const RealMatrix u = spectral_apply(eig, [](double lam) { return 1.0 / std::sqrt(lam); });
    basis.columns.push_back(v.normal_form(column_matmul(u, qhat)));
  }
  if (candidates.kappa && *candidates.kappa == n) basis.terminal_degree = n;
  return basis;
}

/// A_{k,j}, B_{k,j} for one variable index j (0-based).
struct RecurrenceSlice {
  std::size_t j = 0;
  std::vector<RealMatrix> A;
  std::vector<RealMatrix> B;
};

/// Recurrence matrices for every variable: A[j][k], B[j][k].
struct RecurrenceData {
  std::size_t nvars = 0;
  std::vector<std::vector<RealMatrix>> A;
  std::vector<std::vector<RealMatrix>> B;
  std::optional<int> terminal_degree;

  /// Number of degrees covered (k = 0..degrees()-1).
  int degrees() const { return A.empty() ? 0 : static_cast<int>(A.front().size()); }
};

/// A_{k,j} = L(X_j Q_k Q_{k+1}^T), B_{k,j} = L(X_j Q_k Q_k^T) for k below the
/// top column. At a terminal degree kappa, A_{kappa,j} is the all-ones column.
inline RecurrenceSlice extract_recurrence(const MomentFunctional& l, const RigidBasis& basis, std::size_t j) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const std::size_t d = basis.nvars();
  if (j >= d) throw DimensionError("variable index out of range");
  const FloatPolynomial xj = FloatPolynomial::variable(d, j);
  RecurrenceSlice s;
  s.j = j;
  const int top = basis.terminal_degree ? *basis.terminal_degree : basis.max_degree() - 1;
  for (int k = 0; k <= top; ++k) {
    const FloatColumn xq = xj * basis[static_cast<std::size_t>(k)];
    if (basis.terminal_degree && k == *basis.terminal_degree) {
      s.A.emplace_back(basis[static_cast<std::size_t>(k)].size(), 1, 1.0);
    } else {
      s.A.push_back(l.gram(xq, basis[static_cast<std::size_t>(k + 1)]));
    }
    s.B.push_back(l.gram(xq, basis[static_cast<std::size_t>(k)]));
  }
  return s;
}

inline RecurrenceData extract_recurrence(const MomentFunctional& l, const RigidBasis& basis) {
  RecurrenceData rec;
  rec.nvars = basis.nvars();
  rec.terminal_degree = basis.terminal_degree;
  for (std::size_t j = 0; j < rec.nvars; ++j) {
    RecurrenceSlice s = extract_recurrence(l, basis, j);
    rec.A.push_back(std::move(s.A));
    rec.B.push_back(std::move(s.B));
  }
  return rec;
}

struct RecurrenceReport {
  std::vector<std::vector<double>> residuals;  // [j][k]
  double max_residual = 0.0;
  double threshold = kRecurrenceTol;
  bool pass = false;
};

/// Column X_j Q_k - A_{k,j} Q_{k+1} - B_{k,j} Q_k - A_{k-1,j}^T Q_{k-1}, unreduced,
/// evaluated exactly on the binary values of the float data.
inline RationalColumn recurrence_defect(const RigidBasis& basis, const RecurrenceData& rec, std::size_t j, int k) {
  const auto ku = static_cast<std::size_t>(k);
  const RationalColumn qk = to_rational(basis[ku]);
  RationalColumn r = RationalPolynomial::variable(basis.nvars(), j) * qk;
  const bool terminal = basis.terminal_degree && k == *basis.terminal_degree;
  if (!terminal) r = r - column_matmul(to_rational(rec.A[j][ku]), to_rational(basis[ku + 1]));
  r = r - column_matmul(to_rational(rec.B[j][ku]), qk);
  if (k > 0) r = r - column_matmul(to_rational(rec.A[j][ku - 1].transpose()), to_rational(basis[ku - 1]));
  return r;
}

/// Residual = max coefficient of NF_V of the recurrence defect, per (j, k).
inline RecurrenceReport verify_recurrence(const Ideal& v, const RigidBasis& basis, const RecurrenceData& rec,
                                          double tol = kRecurrenceTol) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  RecurrenceReport rep;
  rep.threshold = tol;
  for (std::size_t j = 0; j < rec.nvars; ++j) {
    std::vector<double> row;
    for (int k = 0; k < rec.degrees(); ++k) {
      const double r = max_abs_coefficient(to_float(v.normal_form(recurrence_defect(basis, rec, j, k))));
      row.push_back(r);
      rep.max_residual = std::max(rep.max_residual, r);
    }
    rep.residuals.push_back(std::move(row));
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

struct StructuralReport {
  bool b_symmetric = true;
  bool a_injective = true;
  double max_asymmetry = 0.0;
  double min_singular_value = INFINITY;  // over all stacked A
  std::vector<std::string> failures;

  bool pass() const { return b_symmetric && a_injective; }
};

/// B_{k,j} symmetric and the stack [A_{k,1}; ...; A_{k,d}] of full column rank d_V(k+1).
inline StructuralReport structural_checks(const RecurrenceData& rec) {
  StructuralReport rep;
  for (int k = 0; k < rec.degrees(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (std::size_t j = 0; j < rec.nvars; ++j) {
      const RealMatrix& b = rec.B[j][ku];
      const double asym = max_abs_diff(b, b.transpose());
      rep.max_asymmetry = std::max(rep.max_asymmetry, asym);
      if (asym > kSymmetryTol) {
        rep.b_symmetric = false;
        rep.failures.push_back("B not symmetric at k=" + std::to_string(k) + ", j=" + std::to_string(j + 1));
      }
    }
    if (rec.terminal_degree && k == *rec.terminal_degree) continue;
    const std::size_t rows = rec.A[0][ku].rows(), cols = rec.A[0][ku].cols();
    RealMatrix stacked(rows * rec.nvars, cols);
    for (std::size_t j = 0; j < rec.nvars; ++j)
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) stacked(j * rows + r, c) = rec.A[j][ku](r, c);
    const auto sv = singular_values(stacked);
    const double smin = sv.size() < cols ? 0.0 : sv[cols - 1];
    rep.min_singular_value = std::min(rep.min_singular_value, smin);
    if (smin < kRankFloor) {
      rep.a_injective = false;
      rep.failures.push_back("stacked A not injective at k=" + std::to_string(k));
    }
  }
  return rep;
}

/// Q_k -> O_k Q_k for every k; used to probe gauge covariance.
inline RigidBasis rotate_basis(const RigidBasis& basis, const std::vector<RealMatrix>& rotations) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  RigidBasis out = basis;
  for (std::size_t k = 0; k < out.columns.size(); ++k) out.columns[k] = column_matmul(rotations.at(k), basis[k]);
  return out;
}

/// Coordinates of residues in the basis {entries of Q_0..Q_D}, where D is the
/// top degree. Solves against the standard-monomial coordinate matrix,
/// factored once.
class ResidueBasis {
 public:
  explicit ResidueBasis(const RigidBasis& basis) : ideal_(basis.ideal) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
    const int top = basis.max_degree();
    for (int k = 0; k <= top; ++k) {
      for (const auto& m : ideal_->standard_monomials(k)) index_.emplace(m, index_.size());
    }
    for (const auto& col : basis.columns) {
      offsets_.push_back(count_);
      count_ += col.size();
    }
    if (count_ != index_.size()) {
      throw DimensionError("basis has " + std::to_string(count_) + " entries but the quotient through degree " +
                           std::to_string(top) + " has dimension " + std::to_string(index_.size()));
    }
    coords_ = RealMatrix(count_, count_, 0.0);
    std::size_t row = 0;
    for (const auto& col : basis.columns) {
      for (const auto& e : col) {
        const auto c = monomial_coordinates(e);
        for (std::size_t i = 0; i < count_; ++i) coords_(i, row) = c[i];
        ++row;
      }
    }
    const auto sv = singular_values(coords_);
    min_sv_ = sv.back();
    max_sv_ = sv.front();
    lu_ = std::make_shared<const LuFactor>(coords_);
  }

  std::size_t size() const { return count_; }
  std::size_t offset(int degree) const { return offsets_.at(static_cast<std::size_t>(degree)); }
  int max_degree() const { return static_cast<int>(offsets_.size()) - 1; }
  double min_singular_value() const { return min_sv_; }
  double max_singular_value() const { return max_sv_; }

  /// Standard-monomial coordinates of NF_V(p); throws when NF_V(p) leaves the covered degrees.
  std::vector<double> monomial_coordinates(const FloatPolynomial& p) const {
  const ScopedZeroTolerance working(kWorkingZeroTol);
    std::vector<double> out(count_, 0.0);
    const FloatPolynomial r = ideal_->normal_form(p);
    for (const auto& [m, c] : r.terms()) {
      auto it = index_.find(m);
      if (it == index_.end()) {
        throw PreconditionError("residue has degree " + std::to_string(m.degree()) +
                                " beyond the basis top degree");
      }
      out[it->second] = c;
    }
    return out;
  }

  /// c with p == sum_i c_i e_i modulo V, e_i the basis entries in order.
  std::vector<double> expand(const FloatPolynomial& p) const { return lu_->solve(monomial_coordinates(p)); }

  /// Row i = expansion of entry i of the column.
  RealMatrix expand(const FloatColumn& col) const {
    RealMatrix out(col.size(), count_);
    for (std::size_t i = 0; i < col.size(); ++i) {
      const auto c = expand(col[i]);
      for (std::size_t j = 0; j < count_; ++j) out(i, j) = c[j];
    }
    return out;
  }

  /// Columns [offset(k), offset(k)+d(k)) of an expansion matrix.
  RealMatrix block(const RealMatrix& expansion, int k) const {
    const std::size_t lo = offset(k);
    const std::size_t hi = static_cast<std::size_t>(k) + 1 < offsets_.size() ? offset(k + 1) : count_;
    RealMatrix out(expansion.rows(), hi - lo);
    for (std::size_t i = 0; i < expansion.rows(); ++i)
      for (std::size_t j = lo; j < hi; ++j) out(i, j - lo) = expansion(i, j);
    return out;
  }

  /// Largest |entry| of an expansion outside block k.
  double off_block_max(const RealMatrix& expansion, int k) const {
    const std::size_t lo = offset(k);
    const std::size_t hi = static_cast<std::size_t>(k) + 1 < offsets_.size() ? offset(k + 1) : count_;
    double worst = 0.0;
    for (std::size_t i = 0; i < expansion.rows(); ++i)
      for (std::size_t j = 0; j < expansion.cols(); ++j)
        if (j < lo || j >= hi) worst = std::max(worst, std::abs(expansion(i, j)));
    return worst;
  }

 private:
  std::shared_ptr<const Ideal> ideal_;
  std::map<Monomial, std::size_t, GrevlexDescending> index_;
  std::vector<std::size_t> offsets_;
  std::size_t count_ = 0;
  RealMatrix coords_;
  std::shared_ptr<const LuFactor> lu_;
  double min_sv_ = 0.0;
  double max_sv_ = 0.0;
};

}  // namespace cdpoly
