#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cdpoly/errors.hpp"
#include "cdpoly/matrix.hpp"
#include "cdpoly/polynomial.hpp"

namespace cdpoly {

/// Ordered, nonempty list of polynomials sharing one variable count.
template <Coefficient K>
class ColumnPolynomial {
 public:
  ColumnPolynomial() = default;
  explicit ColumnPolynomial(std::vector<Polynomial<K>> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DimensionError("column polynomial must have at least one entry");
    for (const auto& e : entries_) {
      if (e.nvars() != entries_.front().nvars()) throw DimensionError("column entries differ in nvars");
    }
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t nvars() const { return entries_.empty() ? 0 : entries_.front().nvars(); }
  const Polynomial<K>& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Polynomial<K>>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Entry i replaced by f(entry i).
  template <class F>
  ColumnPolynomial map(F&& f) const {
    std::vector<Polynomial<K>> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(f(e));
    return ColumnPolynomial(std::move(out));
  }

  friend ColumnPolynomial operator+(const ColumnPolynomial& a, const ColumnPolynomial& b) {
    a.check_same(b);
    std::vector<Polynomial<K>> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return ColumnPolynomial(std::move(out));
  }

  friend ColumnPolynomial operator-(const ColumnPolynomial& a, const ColumnPolynomial& b) {
    a.check_same(b);
    std::vector<Polynomial<K>> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return ColumnPolynomial(std::move(out));
  }

  /// p * column, entrywise.
  friend ColumnPolynomial operator*(const Polynomial<K>& p, const ColumnPolynomial& q) {
    return q.map([&](const Polynomial<K>& e) { return p * e; });
  }

 private:
  void check_same(const ColumnPolynomial& b) const {
    if (b.size() != size()) throw DimensionError("column sizes differ");
  }

  std::vector<Polynomial<K>> entries_;
};

using FloatColumn = ColumnPolynomial<double>;
using RationalColumn = ColumnPolynomial<Rational>;

/// M * Q, with (M Q)[i] = sum_j M[i,j] Q[j].
template <Coefficient K>
ColumnPolynomial<K> column_matmul(const Matrix<K>& m, const ColumnPolynomial<K>& q) {
  if (m.cols() != q.size()) throw DimensionError("column_matmul: matrix columns != column size");
  std::vector<Polynomial<K>> out;
  out.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Polynomial<K> acc(q.nvars());
    for (std::size_t j = 0; j < m.cols(); ++j) acc += q[j].scaled(m(i, j));
    out.push_back(std::move(acc));
  }
  return ColumnPolynomial<K>(std::move(out));
}

/// P Q^T as a matrix of polynomials (conjugation is the identity on real coefficients).
template <Coefficient K>
Matrix<Polynomial<K>> outer(const ColumnPolynomial<K>& p, const ColumnPolynomial<K>& q) {
  if (p.nvars() != q.nvars()) throw DimensionError("outer: columns differ in nvars");
  Matrix<Polynomial<K>> out(p.size(), q.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out(i, j) = p[i] * q[j];
  return out;
}

/// P^T Q = sum_i P[i] Q[i].
template <Coefficient K>
Polynomial<K> dot(const ColumnPolynomial<K>& p, const ColumnPolynomial<K>& q) {
  if (p.size() != q.size()) throw DimensionError("dot: column sizes differ");
  Polynomial<K> acc(p.nvars());
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * q[i];
  return acc;
}

/// P(x)^T Q(y) as a polynomial in 2d variables.
template <Coefficient K>
Polynomial<K> tensor_dot(const ColumnPolynomial<K>& px, const ColumnPolynomial<K>& qy) {
  if (px.size() != qy.size()) throw DimensionError("tensor_dot: column sizes differ");
  Polynomial<K> acc(2 * px.nvars());
  for (std::size_t i = 0; i < px.size(); ++i) acc += tensor_embed(px[i], Slot::x) * tensor_embed(qy[i], Slot::y);
  return acc;
}

/// Max absolute coefficient over all entries.
template <Coefficient K>
double max_abs_coefficient(const ColumnPolynomial<K>& c) {
  double best = 0.0;
  for (const auto& e : c) best = std::max(best, e.max_abs_coefficient());
  return best;
}

/// Exact binary values of the float entries.
inline RationalColumn to_rational(const FloatColumn& c) {
  std::vector<RationalPolynomial> out;
  for (const auto& e : c) out.push_back(to_rational(e));
  return RationalColumn(std::move(out));
}

inline Matrix<Rational> to_rational(const RealMatrix& m) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline FloatColumn to_float(const RationalColumn& c) {
  return FloatColumn([&] {
    std::vector<FloatPolynomial> out;
    for (const auto& e : c) out.push_back(to_float(e));
    return out;
  }());
}

}  // namespace cdpoly
