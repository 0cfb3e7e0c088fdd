#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "cdpoly/errors.hpp"
#include "cdpoly/matrix.hpp"
#include "cdpoly/rational.hpp"

namespace cdpoly {

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  RealMatrix vectors;          // column i belongs to values[i]
};

/// Cyclic Jacobi rotations for a small dense symmetric matrix.
/// Sweeps until the off-diagonal Frobenius norm falls below tol * ||A||_F.
inline SymmetricEigen symmetric_eigen(RealMatrix a, double tol = 1e-14, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("symmetric_eigen needs a square matrix");
  RealMatrix v = RealMatrix::identity(n);

  auto frob = [&](bool off_only) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!off_only || i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  const double scale = frob(false);

  for (int sweep = 0; sweep < max_sweeps && frob(true) > tol * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{std::vector<double>(n), RealMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

inline RealMatrix symmetrized(const RealMatrix& a) { return scaled(a + a.transpose(), 0.5); }

/// V diag(f(lambda)) V^T for a symmetric eigendecomposition.
template <class F>
RealMatrix spectral_apply(const SymmetricEigen& e, F&& f) {
  const std::size_t n = e.values.size();
  RealMatrix out(n, n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += e.vectors(i, k) * fk * e.vectors(j, k);
  }
  return out;
}

/// Singular values (descending) by one-sided Jacobi rotations.
inline std::vector<double> singular_values(const RealMatrix& m, double tol = 1e-15) {
  RealMatrix a = m.rows() >= m.cols() ? m : m.transpose();
  const std::size_t rows = a.rows(), cols = a.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < rows; ++i) s += a(i, j) * a(i, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

inline std::size_t numeric_rank(const RealMatrix& m, double floor) {
  const auto sv = singular_values(m);
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s >= floor; }));
}

/// LU factorization with partial pivoting of a square matrix.
class LuFactor {
 public:
  explicit LuFactor(RealMatrix a, double rel_pivot_floor = 1e-14) : lu_(std::move(a)) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw DimensionError("LU needs a square matrix");
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), 0);
    const double scale = std::max(max_abs(lu_), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) piv = i;
      if (std::abs(lu_(piv, k)) <= rel_pivot_floor * scale) {
        throw DegeneracyError("singular coordinate matrix", static_cast<int>(k));
      }
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= lu_(i, k) * lu_(k, j);
      }
    }
  }

  std::size_t size() const { return lu_.rows(); }

  std::vector<double> solve(const std::vector<double>& b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw DimensionError("right-hand side has wrong length");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
    return x;
  }

 private:
  RealMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// Lower Cholesky factor, or nullopt if a pivot is not positive.
inline std::optional<RealMatrix> cholesky(const RealMatrix& a) {
  const std::size_t n = a.rows();
  RealMatrix l(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

/// Row echelon form over the rationals; returns the rank.
inline std::size_t exact_rank(Matrix<Rational> a) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < a.rows() && sgn(a(piv, col)) == 0) ++piv;
    if (piv == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(rank, j), a(piv, j));
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      if (sgn(a(i, col)) == 0) continue;
      Rational f = a(i, col) / a(rank, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace cdpoly
