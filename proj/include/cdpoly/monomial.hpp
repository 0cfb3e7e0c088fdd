#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "cdpoly/errors.hpp"

namespace cdpoly {

/// Exponent vector of a monomial in a fixed number of variables.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_) {
      if (e < 0) throw DimensionError("negative exponent in monomial");
    }
    degree_ = std::accumulate(exps_.begin(), exps_.end(), 0);
  }
  /// Braced exponent lists always mean exponents, so Monomial({2}) is x1^2.
  Monomial(std::initializer_list<int> exps) : Monomial(std::vector<int>(exps)) {}

  static Monomial variable(std::size_t nvars, std::size_t index, int power = 1) {
    std::vector<int> e(nvars, 0);
    if (index >= nvars) throw DimensionError("variable index out of range");
    e[index] = power;
    return Monomial(std::move(e));
  }

  std::size_t nvars() const { return exps_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t i) const { return exps_[i]; }
  std::span<const int> exponents() const { return exps_; }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] > other.exps_[i]) return false;
    }
    return true;
  }

  bool coprime(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] > 0 && other.exps_[i] > 0) return false;
    }
    return true;
  }

  Monomial operator*(const Monomial& other) const {
    check_same(other);
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
    return Monomial(std::move(e));
  }

  /// this / other; requires other.divides(*this).
  Monomial quotient(const Monomial& other) const {
    check_same(other);
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.exps_[i];
    return Monomial(std::move(e));
  }

  Monomial lcm(const Monomial& other) const {
    check_same(other);
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(e[i], other.exps_[i]);
    return Monomial(std::move(e));
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

 private:
  void check_same(const Monomial& other) const {
    if (other.exps_.size() != exps_.size()) throw DimensionError("monomial arity mismatch");
  }

  std::vector<int> exps_;
  int degree_ = 0;
};

/// Graded reverse lexicographic order with x1 > x2 > ... (variable 0 largest).
inline bool grevlex_greater(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  for (std::size_t i = a.nvars(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

/// Comparator that sorts monomials in descending grevlex order.
struct GrevlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_greater(a, b); }
};

/// All monomials of total degree `degree` in `nvars` variables, descending.
inline std::vector<Monomial> monomials_of_degree(std::size_t nvars, int degree) {
  std::vector<Monomial> out;
  std::vector<int> e(nvars, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == nvars) {
      e[i] = left;
      out.emplace_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  if (nvars == 0) return out;
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end(), GrevlexDescending{});
  return out;
}

}  // namespace cdpoly
