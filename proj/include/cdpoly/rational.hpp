#pragma once

#include <gmpxx.h>

#include <concepts>
#include <string>

namespace cdpoly {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Default absolute coefficient threshold below which float-mode terms are dropped.
inline constexpr double kFloatZeroTol = 1e-10;

/// Threshold used inside the numerical pipelines: only exact zeros are dropped.
/// Whitening multiplies columns by G^{-1/2}, so an absolute chop applied to the
/// unwhitened columns is amplified far beyond the reported tolerances.
inline constexpr double kWorkingZeroTol = 0.0;

namespace detail {
inline double& zero_tolerance_slot() {
  thread_local double tol = kFloatZeroTol;
  return tol;
}
}  // namespace detail

/// Current float-mode zero tolerance for this thread.
inline double float_zero_tolerance() { return detail::zero_tolerance_slot(); }

/// Overrides the float-mode zero tolerance for the lifetime of the guard.
class ScopedZeroTolerance {
 public:
  explicit ScopedZeroTolerance(double tol) : previous_(detail::zero_tolerance_slot()) {
    detail::zero_tolerance_slot() = tol;
  }
  ~ScopedZeroTolerance() { detail::zero_tolerance_slot() = previous_; }
  ScopedZeroTolerance(const ScopedZeroTolerance&) = delete;
  ScopedZeroTolerance& operator=(const ScopedZeroTolerance&) = delete;

 private:
  double previous_;
};

template <class K>
concept Coefficient = std::same_as<K, double> || std::same_as<K, Rational>;

template <class K>
struct coeff_traits;

template <>
struct coeff_traits<double> {
  static constexpr bool exact = false;
  static bool negligible(double c) {
    const double tol = float_zero_tolerance();
    return !(c > tol || c < -tol);
  }
  static double to_double(double c) { return c; }
  static double from_rational(const Rational& q) { return q.get_d(); }
};

template <>
struct coeff_traits<Rational> {
  static constexpr bool exact = true;
  static bool negligible(const Rational& c) { return sgn(c) == 0; }
  static double to_double(const Rational& c) { return c.get_d(); }
  static Rational from_rational(const Rational& q) { return q; }
};

/// Exact rational value of a finite double.
inline Rational exact_rational(double x) { return Rational(x); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace cdpoly
